use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use egonet::bench::BenchConfig;
use egonet::commands::{
    cmd_analyze, cmd_bench, cmd_run, cmd_snapshot_check, cmd_snapshot_save, fmt_num, AnalyzeArgs, RunArgs,
    SnapshotSummary,
};
use egonet::Result;

#[derive(Parser)]
#[command(
    name = "egonet",
    version,
    about = "Layered ego networks of people, devices and places"
)]
struct Cli {
    /// Run configuration (TOML, or JSON with a .json extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (for `snapshot save`, the snapshot file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed for generated workloads.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay an event file into features.csv and run-report.json.
    Run(RunCmd),
    /// Measure per-update latency on a random contact workload.
    Bench(BenchCmd),
    /// Layer structure and semantic reports for an event file or snapshot.
    Analyze(AnalyzeCmd),
    /// Save or check engine snapshots.
    #[command(subcommand)]
    Snapshot(SnapshotCmd),
}

#[derive(Args)]
struct RunCmd {
    /// JSONL event file.
    events: PathBuf,
    /// JSON map from identifier to canonical alter key.
    #[arg(long)]
    identity: Option<PathBuf>,
    /// Continue from this snapshot.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Save the final state here, leaving the last window open.
    #[arg(long)]
    save_snapshot: Option<PathBuf>,
}

#[derive(Args)]
struct BenchCmd {
    /// Network size cap; repeat for several curves.
    #[arg(long = "eta", default_values_t = [150, 500, 1000])]
    etas: Vec<usize>,
    #[arg(long, default_value_t = 20_000)]
    contacts: usize,
    #[arg(long, default_value_t = 5_000)]
    alters: usize,
    /// Re-cluster on every contact instead of only when the top set changes.
    #[arg(long)]
    force_rebuild: bool,
    #[arg(long, default_value_t = 4)]
    layers: usize,
    /// Width of the encountered-alter buckets.
    #[arg(long, default_value_t = 250)]
    bucket_width: usize,
}

#[derive(Args)]
struct AnalyzeCmd {
    /// JSONL event file or snapshot.
    input: PathBuf,
    /// JSON sidecar mapping alter keys to "Strong" or "Weak".
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    identity: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SnapshotCmd {
    /// Replay events and save the resulting state to --out.
    Save {
        events: PathBuf,
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long)]
        identity: Option<PathBuf>,
    },
    /// Load and validate a snapshot.
    Check { path: PathBuf },
}

fn print_summary(s: &SnapshotSummary) {
    println!(
        "egos: {}, events: {}, windows: {}",
        s.egos, s.stats.events, s.stats.windows
    );
    for (ego, social, prox, gps) in &s.alters {
        println!("  {ego}: social {social}, proximity {prox}, gps {gps}");
    }
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Run(c) => {
            let report = cmd_run(&RunArgs {
                events: c.events,
                config: cli.config,
                out: out.clone(),
                identity: c.identity,
                resume: c.resume,
                save_snapshot: c.save_snapshot,
            })?;
            println!(
                "{} events, {} egos, {} rows -> {}",
                report.input_events,
                report.egos,
                report.rows,
                out.display()
            );
        }
        Command::Bench(c) => {
            let config = BenchConfig {
                etas: c.etas,
                n_contacts: c.contacts,
                n_alters: c.alters,
                num_layers: c.layers,
                force_rebuild: c.force_rebuild,
                seed: cli.seed,
                bucket_width: c.bucket_width,
            };
            let report = cmd_bench(&config, &out)?;
            for curve in &report.curves {
                let post = curve.post_plateau_mean_ms.map(fmt_num).unwrap_or_else(|| "-".into());
                println!(
                    "eta {:>5}: mean {} ms, after plateau {} ms, plateau {}, rebuilds {}",
                    curve.eta,
                    fmt_num(curve.overall_mean_ms),
                    post,
                    curve.plateau,
                    curve.rebuilds
                );
            }
        }
        Command::Analyze(c) => {
            let result = cmd_analyze(&AnalyzeArgs {
                input: c.input,
                config: cli.config,
                out: out.clone(),
                truth: c.truth,
                identity: c.identity,
            })?;
            for notice in &result.notices {
                eprintln!("notice: {notice}");
            }
            println!("analysed {} egos -> {}", result.egos.len(), out.display());
        }
        Command::Snapshot(SnapshotCmd::Save {
            events,
            resume,
            identity,
        }) => {
            let path = if out.is_dir() { out.join("snapshot.json") } else { out };
            let s = cmd_snapshot_save(
                &events,
                cli.config.as_deref(),
                identity.as_deref(),
                resume.as_deref(),
                &path,
            )?;
            println!("saved {}", path.display());
            print_summary(&s);
        }
        Command::Snapshot(SnapshotCmd::Check { path }) => print_summary(&cmd_snapshot_check(&path)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
