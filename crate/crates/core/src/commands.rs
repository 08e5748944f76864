//! File-level commands behind the `egonet` binary: replay a stream into a
//! feature matrix, benchmark the update, analyse layer structure, and manage
//! snapshots. Each command is a plain function so it can be driven from
//! tests and examples as well as from the command line.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{
    semantic_layer_eval, structure_report, EgoInput, SemanticReport, StructureReport, TruthTags, WeightSample,
};
use crate::bench::{run_bench, BenchConfig, BenchReport};
use crate::config::RunConfig;
use crate::engine::EgoState;
use crate::error::{Error, Result};
use crate::ingest::{read_events, sort_rows, EventEnvelope, FeatureRow, IdentityMap, ReplayStats, Replayer};
use crate::layers::EgoNetwork;
use crate::snapshot;

/// The three networks kept per ego, in output order.
pub const NETWORK_KINDS: [&str; 3] = ["social", "proximity", "gps"];

/// Formats a number with 6 significant digits, `.` as decimal separator and
/// no trailing zeros. Magnitudes below 1e-4 or from 1e6 up use exponent
/// notation (`1.5e-7`, `2.5e6`).
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn io_context(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_context(path))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialises");
    text.push('\n');
    write_file(path, &text)
}

fn create_out_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(io_context(out))
}

/// Reads a JSONL event file.
pub fn load_events(path: &Path) -> Result<Vec<EventEnvelope>> {
    let f = File::open(path).map_err(io_context(path))?;
    read_events(BufReader::new(f))
}

/// Loads the configuration file, or returns the defaults.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

pub fn load_truth_tags(path: &Path) -> Result<TruthTags> {
    let text = fs::read_to_string(path).map_err(io_context(path))?;
    serde_json::from_str(&text).map_err(|e| Error::validation(format!("{}: invalid truth tags: {e}", path.display())))
}

// ---------------------------------------------------------------- run

#[derive(Debug, Clone, Default)]
pub struct RunArgs {
    pub events: PathBuf,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub identity: Option<PathBuf>,
    /// Continue from a snapshot instead of a fresh state.
    pub resume: Option<PathBuf>,
    /// Persist the final state here. The last window of each ego is left
    /// open (and not emitted) so a later `resume` continues seamlessly.
    pub save_snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub status: String,
    pub error: Option<String>,
    pub input_events: usize,
    pub egos: usize,
    pub rows: usize,
    pub stats: ReplayStats,
}

/// Column names of `features.csv` for the given configuration.
pub fn features_header(config: &RunConfig) -> Vec<String> {
    let mut h = vec!["ego".to_string(), "window_end".to_string()];
    for (prefix, l) in [
        ("sc", config.social.layers),
        ("fpp", config.proximity.layers),
        ("fpg", config.gps.layers),
    ] {
        h.extend((1..=l).map(|i| format!("{prefix}_{i}")));
    }
    h.push("active_count".into());
    h
}

pub fn feature_record(row: &FeatureRow) -> Vec<String> {
    let mut r = vec![row.ego.clone(), row.window_end.to_string()];
    r.extend(row.sc.iter().chain(&row.fpp).chain(&row.fpg).map(|v| fmt_num(*v)));
    r.push(row.active_count.to_string());
    r
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::validation(format!("csv: {other:?}")),
    }
}

pub fn write_features(path: &Path, config: &RunConfig, rows: &[FeatureRow]) -> Result<()> {
    let f = File::create(path).map_err(io_context(path))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(f));
    w.write_record(features_header(config)).map_err(csv_error)?;
    for row in rows {
        w.write_record(feature_record(row)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Renders a small in-memory table as CSV.
fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn apply_identity(events: &mut [EventEnvelope], identity: Option<&Path>) -> Result<()> {
    if let Some(p) = identity {
        let map = IdentityMap::load(p)?;
        events.iter_mut().for_each(|e| map.apply(e));
    }
    Ok(())
}

fn initial_state(config: Option<&Path>, resume: Option<&Path>) -> Result<Replayer> {
    match resume {
        Some(snap) => {
            let state = snapshot::load(snap)?;
            if let Some(p) = config {
                if &RunConfig::load(p)? != state.config() {
                    return Err(Error::validation(
                        "config differs from the configuration stored in the snapshot",
                    ));
                }
            }
            Ok(state)
        }
        None => Replayer::new(load_config(config)?),
    }
}

/// Replays an event file and writes `features.csv` and `run-report.json`
/// into `out`. A failed replay still writes the report, with the error.
pub fn cmd_run(args: &RunArgs) -> Result<RunReport> {
    let mut state = initial_state(args.config.as_deref(), args.resume.as_deref())?;
    let mut events = load_events(&args.events)?;
    apply_identity(&mut events, args.identity.as_deref())?;
    create_out_dir(&args.out)?;

    let result: Result<Vec<FeatureRow>> = (|| {
        let mut rows = state.process(&events)?;
        if args.save_snapshot.is_none() {
            rows.extend(state.finish()?);
        }
        sort_rows(&mut rows);
        Ok(rows)
    })();

    let mut report = RunReport {
        status: "ok".into(),
        error: None,
        input_events: events.len(),
        egos: state.egos().count(),
        rows: 0,
        stats: state.stats(),
    };
    let rows = match result {
        Ok(rows) => rows,
        Err(e) => {
            report.status = "error".into();
            report.error = Some(e.to_string());
            write_json(&args.out.join("run-report.json"), &report)?;
            return Err(e);
        }
    };
    report.rows = rows.len();
    write_features(&args.out.join("features.csv"), state.config(), &rows)?;
    write_json(&args.out.join("run-report.json"), &report)?;
    if let Some(p) = &args.save_snapshot {
        snapshot::save(&state, p).map_err(|e| match e {
            Error::Io(io) => io_context(p)(io),
            other => other,
        })?;
    }
    Ok(report)
}

// ---------------------------------------------------------------- bench

/// Runs the latency benchmark and writes `bench-report.json` into `out`.
pub fn cmd_bench(config: &BenchConfig, out: &Path) -> Result<BenchReport> {
    let report = run_bench(config)?;
    create_out_dir(out)?;
    write_json(&out.join("bench-report.json"), &report)?;
    Ok(report)
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Clone, Default)]
pub struct AnalyzeArgs {
    /// An events file (JSONL) or a snapshot.
    pub input: PathBuf,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub truth: Option<PathBuf>,
    pub identity: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkAnalysis {
    pub network: &'static str,
    pub structure: StructureReport,
    /// `None` when no truth tags were supplied or none applied.
    pub semantics: Option<SemanticReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutput {
    pub egos: Vec<String>,
    pub networks: Vec<NetworkAnalysis>,
    /// Human-readable notes, e.g. skipped sections.
    pub notices: Vec<String>,
}

fn is_snapshot(path: &Path) -> Result<bool> {
    let text = fs::read_to_string(path).map_err(io_context(path))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    Ok(serde_json::from_str::<serde_json::Value>(first)
        .ok()
        .and_then(|v| {
            v.get("format")
                .and_then(|f| f.as_str())
                .map(|f| f == snapshot::SNAPSHOT_FORMAT)
        })
        .unwrap_or(false))
}

/// Brings an events file or snapshot to a final replay state.
pub fn load_state(input: &Path, config: Option<&Path>, identity: Option<&Path>) -> Result<Replayer> {
    if is_snapshot(input)? {
        return initial_state(config, Some(input));
    }
    let mut state = Replayer::new(load_config(config)?)?;
    let mut events = load_events(input)?;
    apply_identity(&mut events, identity)?;
    state.process(&events)?;
    state.finish()?;
    Ok(state)
}

fn network_state<'a>(state: &'a Replayer, ego: &str, kind: &str) -> &'a EgoState {
    let e = state.ego(ego).expect("ego exists").engine();
    match kind {
        "social" => e.social.ego(),
        "proximity" => e.proximity.ego(),
        _ => e.gps.ego(),
    }
}

/// Structure (and, given truth tags, semantic) analysis of every network
/// kind of every ego in `state`.
pub fn analyze_state(state: &Replayer, tags: Option<&TruthTags>) -> Result<AnalyzeOutput> {
    let egos: Vec<String> = state.egos().map(|(e, _)| e.to_string()).collect();
    let mut networks = Vec::new();
    let mut notices = Vec::new();
    if tags.is_none() {
        notices.push("no truth-tag sidecar given; semantic evaluation skipped".to_string());
    }
    for kind in NETWORK_KINDS {
        let nets: Vec<std::sync::Arc<EgoNetwork>> =
            egos.iter().map(|e| network_state(state, e, kind).network()).collect();
        let samples: Vec<Vec<WeightSample>> = egos
            .iter()
            .map(|e| {
                network_state(state, e, kind)
                    .ranking()
                    .iter()
                    .map(|r| WeightSample {
                        ego: e.clone(),
                        alter: r.id.clone(),
                        weight: r.weight,
                        truth_tag: tags.and_then(|t| t.get(r.id.key()).copied()),
                    })
                    .collect()
            })
            .collect();
        let inputs: Vec<EgoInput<'_>> = egos
            .iter()
            .zip(&nets)
            .zip(&samples)
            .map(|((ego, network), samples)| EgoInput { ego, network, samples })
            .collect();
        let structure = structure_report(&inputs);

        let semantics = match tags {
            Some(tags) => {
                let tagged_any = nets
                    .iter()
                    .any(|n| n.built_from().iter().any(|(id, _)| tags.contains_key(id.key())));
                let populated = nets.iter().any(|n| !n.is_empty());
                if tagged_any {
                    let pairs: Vec<(&str, &EgoNetwork)> =
                        egos.iter().map(String::as_str).zip(nets.iter().map(|n| &**n)).collect();
                    Some(semantic_layer_eval(&pairs, tags)?)
                } else {
                    if populated {
                        notices.push(format!(
                            "no {kind} alter is tagged; semantic evaluation of {kind} networks skipped"
                        ));
                    }
                    None
                }
            }
            None => None,
        };
        networks.push(NetworkAnalysis {
            network: kind,
            structure,
            semantics,
        });
    }
    Ok(AnalyzeOutput {
        egos,
        networks,
        notices,
    })
}

pub fn structure_csv(out: &AnalyzeOutput) -> String {
    let mut rows = Vec::new();
    for n in &out.networks {
        for e in &n.structure.per_ego {
            for (i, (c, m)) in e.counts.iter().zip(&e.mean_weights).enumerate() {
                if let Some(m) = m {
                    rows.push(vec![
                        n.network.into(),
                        e.ego.clone(),
                        (i + 1).to_string(),
                        c.to_string(),
                        fmt_num(*m),
                    ]);
                }
            }
        }
    }
    csv_table(&["network", "ego", "layer", "count", "mean_weight"], rows)
}

pub fn structure_summary_csv(out: &AnalyzeOutput) -> String {
    let mut rows = Vec::new();
    for n in &out.networks {
        for (i, (c, m)) in n
            .structure
            .mean_counts
            .iter()
            .zip(&n.structure.mean_weights)
            .enumerate()
        {
            rows.push(vec![
                n.network.into(),
                (i + 1).to_string(),
                fmt_num(*c),
                m.map(fmt_num).unwrap_or_default(),
            ]);
        }
    }
    csv_table(&["network", "layer", "mean_count", "mean_weight"], rows)
}

pub fn ccdf_csv(out: &AnalyzeOutput) -> String {
    let rows = out.networks.iter().flat_map(|n| {
        n.structure
            .ccdf
            .iter()
            .map(|(x, f)| vec![n.network.into(), x.to_string(), fmt_num(*f)])
    });
    csv_table(&["network", "distinct_alters", "fraction_of_egos"], rows)
}

pub fn circles_hist_csv(out: &AnalyzeOutput) -> String {
    let rows = out.networks.iter().flat_map(|n| {
        n.structure
            .circles_histogram
            .iter()
            .map(|(c, k)| vec![n.network.into(), c.to_string(), k.to_string()])
    });
    csv_table(&["network", "circles", "egos"], rows)
}

/// Per-ego rows, followed by one `*` row per layer whose counts are totals
/// and whose fraction is the mean of the per-ego fractions.
pub fn semantics_csv(out: &AnalyzeOutput) -> String {
    let mut rows = Vec::new();
    for n in &out.networks {
        let Some(sem) = &n.semantics else { continue };
        for e in &sem.per_ego {
            for (i, l) in e.layers.iter().enumerate() {
                if let (Some(sf), Some(wf)) = (l.strong_fraction(), l.weak_fraction()) {
                    rows.push(vec![
                        n.network.into(),
                        e.ego.clone(),
                        (i + 1).to_string(),
                        l.strong.to_string(),
                        l.weak.to_string(),
                        fmt_num(sf),
                        fmt_num(wf),
                    ]);
                }
            }
        }
        for (i, f) in sem.mean_strong_fraction.iter().enumerate() {
            if let Some(f) = f {
                let layer = || sem.per_ego.iter().filter_map(move |e| e.layers.get(i));
                let strong: usize = layer().map(|l| l.strong).sum();
                let weak: usize = layer().map(|l| l.weak).sum();
                rows.push(vec![
                    n.network.into(),
                    "*".into(),
                    (i + 1).to_string(),
                    strong.to_string(),
                    weak.to_string(),
                    fmt_num(*f),
                    fmt_num(1.0 - f),
                ]);
            }
        }
    }
    csv_table(
        &[
            "network",
            "ego",
            "layer",
            "strong",
            "weak",
            "strong_fraction",
            "weak_fraction",
        ],
        rows,
    )
}

/// Analyses an events file or snapshot and writes `structure.csv`,
/// `structure-summary.csv`, `ccdf.csv`, `circles-hist.csv` and, when a
/// truth-tag sidecar is given, `semantics.csv`.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalyzeOutput> {
    let state = load_state(&args.input, args.config.as_deref(), args.identity.as_deref())?;
    let tags = args.truth.as_deref().map(load_truth_tags).transpose()?;
    let out = analyze_state(&state, tags.as_ref())?;
    create_out_dir(&args.out)?;
    write_file(&args.out.join("structure.csv"), &structure_csv(&out))?;
    write_file(&args.out.join("structure-summary.csv"), &structure_summary_csv(&out))?;
    write_file(&args.out.join("ccdf.csv"), &ccdf_csv(&out))?;
    write_file(&args.out.join("circles-hist.csv"), &circles_hist_csv(&out))?;
    if tags.is_some() {
        write_file(&args.out.join("semantics.csv"), &semantics_csv(&out))?;
    }
    Ok(out)
}

// ---------------------------------------------------------------- snapshot

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSummary {
    pub egos: usize,
    pub stats: ReplayStats,
    /// `(ego, social, proximity, gps)` ranked-alter counts.
    pub alters: Vec<(String, usize, usize, usize)>,
}

pub fn summarize_state(state: &Replayer) -> SnapshotSummary {
    let alters = state
        .egos()
        .map(|(name, e)| {
            let e = e.engine();
            (
                name.to_string(),
                e.social.ego().ranking().len(),
                e.proximity.ego().ranking().len(),
                e.gps.ego().ranking().len(),
            )
        })
        .collect();
    SnapshotSummary {
        egos: state.egos().count(),
        stats: state.stats(),
        alters,
    }
}

/// Replays `events` (on top of `resume`, if given) and writes the state to
/// `path` without closing the last window.
pub fn cmd_snapshot_save(
    events: &Path,
    config: Option<&Path>,
    identity: Option<&Path>,
    resume: Option<&Path>,
    path: &Path,
) -> Result<SnapshotSummary> {
    let mut state = initial_state(config, resume)?;
    let mut evs = load_events(events)?;
    apply_identity(&mut evs, identity)?;
    state.process(&evs)?;
    snapshot::save(&state, path)?;
    Ok(summarize_state(&state))
}

/// Loads and validates a snapshot.
pub fn cmd_snapshot_check(path: &Path) -> Result<SnapshotSummary> {
    Ok(summarize_state(&snapshot::load(path)?))
}
