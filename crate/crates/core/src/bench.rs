//! Per-update latency of the ego-network update under a random contact
//! workload.
//!
//! Each contact updates its alter's contact record (untimed), then the
//! network update is timed with a monotonic clock. With `force_rebuild` the
//! layers are re-clustered on every contact, the worst case. Latencies are
//! bucketed by the number of distinct alters encountered so far (`n_a`);
//! once `n_a` passes `eta` the clustered set stops growing and the latency
//! should plateau.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::alter::AlterId;
use crate::engine::{EgoState, EngineConfig};
use crate::error::{Error, Result};
use crate::ingest::synth::generate_benchmark;
use crate::places::proximity::DEFAULT_DELTA_MAX_MS;
use crate::places::LocationWeightState;
use crate::ranking::ActiveWeight;

/// Post-plateau bucket means must stay within this factor of each other.
pub const PLATEAU_TOLERANCE: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub etas: Vec<usize>,
    pub n_contacts: usize,
    pub n_alters: usize,
    pub num_layers: usize,
    pub force_rebuild: bool,
    pub seed: u64,
    /// Width of an `n_a` bucket, in alters.
    pub bucket_width: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            etas: vec![150, 500, 1000],
            n_contacts: 20_000,
            n_alters: 5_000,
            num_layers: 4,
            force_rebuild: true,
            seed: 1,
            bucket_width: 250,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyBucket {
    /// Inclusive range of `n_a` covered.
    pub n_a_min: usize,
    pub n_a_max: usize,
    pub samples: usize,
    pub mean_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCurve {
    pub eta: usize,
    pub buckets: Vec<LatencyBucket>,
    pub overall_mean_ms: f64,
    /// Mean over updates made with `n_a >= eta`.
    pub post_plateau_mean_ms: Option<f64>,
    /// `n_a` reached `eta` and the post-plateau bucket means agree within
    /// [`PLATEAU_TOLERANCE`].
    pub plateau: bool,
    pub rebuilds: u64,
    pub max_n_a: usize,
}

impl BenchCurve {
    /// Buckets lying entirely at or beyond `eta`.
    pub fn post_plateau_buckets(&self) -> impl Iterator<Item = &LatencyBucket> {
        self.buckets.iter().filter(move |b| b.n_a_min >= self.eta)
    }

    /// Buckets lying entirely below `eta`.
    pub fn pre_plateau_buckets(&self) -> impl Iterator<Item = &LatencyBucket> {
        self.buckets.iter().filter(move |b| b.n_a_max < self.eta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub curves: Vec<BenchCurve>,
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.etas.is_empty() || config.bucket_width == 0 {
        return Err(Error::validation(
            "bench needs at least one eta and a positive bucket width",
        ));
    }
    let events = generate_benchmark(config.n_contacts, config.n_alters, config.seed)?;
    let contacts: Vec<(AlterId, i64)> = events
        .iter()
        .map(|e| Ok((AlterId::device(e.counterpart.as_deref().unwrap_or_default())?, e.ts)))
        .collect::<Result<_>>()?;

    let curves = config
        .etas
        .iter()
        .map(|&eta| run_curve(config, eta, &contacts))
        .collect::<Result<_>>()?;
    Ok(BenchReport {
        config: config.clone(),
        curves,
    })
}

fn run_curve(config: &BenchConfig, eta: usize, contacts: &[(AlterId, i64)]) -> Result<BenchCurve> {
    let mut ego = EgoState::new(EngineConfig::new(eta, config.num_layers.min(eta))?)?;
    let mut weights = LocationWeightState::new(DEFAULT_DELTA_MAX_MS)?;
    // (n_a, seconds) per update
    let mut samples = Vec::with_capacity(contacts.len());
    let mut batch = Vec::with_capacity(1);

    for (id, ts) in contacts {
        let rec = weights.update(id, *ts)?;
        batch.clear();
        batch.push(ActiveWeight::new(id.clone(), rec.weight, rec.n_contacts, rec.last_seen));
        let start = Instant::now();
        if config.force_rebuild {
            ego.update_forced(&batch)?;
        } else {
            ego.update(&batch)?;
        }
        let elapsed = start.elapsed().as_secs_f64();
        samples.push((ego.ranking().len(), elapsed));
    }

    let w = config.bucket_width;
    let max_n_a = samples.iter().map(|s| s.0).max().unwrap_or(0);
    let mut sums = vec![(0.0, 0usize); max_n_a.div_ceil(w)];
    for &(n_a, t) in &samples {
        let b = &mut sums[(n_a - 1) / w];
        b.0 += t;
        b.1 += 1;
    }
    let buckets: Vec<LatencyBucket> = sums
        .iter()
        .enumerate()
        .filter(|(_, s)| s.1 > 0)
        .map(|(i, &(sum, n))| LatencyBucket {
            n_a_min: i * w + 1,
            n_a_max: ((i + 1) * w).min(max_n_a),
            samples: n,
            mean_ms: sum * 1e3 / n as f64,
        })
        .collect();

    let mean = |it: &mut dyn Iterator<Item = f64>| {
        let (s, n) = it.fold((0.0, 0usize), |(s, n), t| (s + t, n + 1));
        (n > 0).then(|| s * 1e3 / n as f64)
    };
    let overall_mean_ms = mean(&mut samples.iter().map(|s| s.1)).unwrap_or(0.0);
    let post_plateau_mean_ms = mean(&mut samples.iter().filter(|s| s.0 >= eta).map(|s| s.1));

    let mut curve = BenchCurve {
        eta,
        buckets,
        overall_mean_ms,
        post_plateau_mean_ms,
        plateau: false,
        rebuilds: ego.rebuilds(),
        max_n_a,
    };
    let post: Vec<f64> = curve.post_plateau_buckets().map(|b| b.mean_ms).collect();
    curve.plateau = max_n_a >= eta && !post.is_empty() && {
        let lo = post.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = post.iter().cloned().fold(0.0, f64::max);
        lo > 0.0 && hi / lo <= PLATEAU_TOLERANCE
    };
    Ok(curve)
}
