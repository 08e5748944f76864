//! Per-update latency of the ego-network update as the number of
//! encountered alters grows, forcing a re-clustering on every contact.
//!
//! `cargo run --release --example latency_bench -- [contacts] [alters]`

use egonet::bench::{run_bench, BenchConfig};

fn main() -> egonet::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("a positive integer"));
    let config = BenchConfig {
        n_contacts: args.next().unwrap_or(20_000),
        n_alters: args.next().unwrap_or(5_000),
        ..Default::default()
    };
    let report = run_bench(&config)?;
    let slowest = report
        .curves
        .iter()
        .flat_map(|c| &c.buckets)
        .map(|b| b.mean_ms)
        .fold(0.0, f64::max);
    for curve in &report.curves {
        println!(
            "eta = {} (plateau: {}, rebuilds: {})",
            curve.eta, curve.plateau, curve.rebuilds
        );
        for b in curve.buckets.iter().step_by(4) {
            println!(
                "  n_a {:>5}-{:<5} {:>8.4} ms  {}",
                b.n_a_min,
                b.n_a_max,
                b.mean_ms,
                "*".repeat((40.0 * b.mean_ms / slowest) as usize)
            );
        }
        if let Some(m) = curve.post_plateau_mean_ms {
            println!("  mean once n_a >= eta: {m:.4} ms");
        }
    }
    Ok(())
}
