//! Structural statistics of layered ego networks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::alter::AlterId;
use crate::analysis::meanshift::optimal_circles;
use crate::layers::EgoNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TruthTag {
    Strong,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSample {
    pub ego: String,
    pub alter: AlterId,
    pub weight: f64,
    pub truth_tag: Option<TruthTag>,
}

/// One ego's network together with the weights of every alter it has seen.
#[derive(Debug, Clone, Copy)]
pub struct EgoInput<'a> {
    pub ego: &'a str,
    pub network: &'a EgoNetwork,
    pub samples: &'a [WeightSample],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoLayerStats {
    pub ego: String,
    pub counts: Vec<usize>,
    /// `None` for empty layers.
    pub mean_weights: Vec<Option<f64>>,
    pub distinct_alters: usize,
    /// Mode count of this ego's weights; `None` without samples.
    pub optimal_circles: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub per_ego: Vec<EgoLayerStats>,
    /// Average number of alters per layer across egos.
    pub mean_counts: Vec<f64>,
    /// Average over egos (with that layer populated) of the layer mean weight.
    pub mean_weights: Vec<Option<f64>>,
    /// `(x, fraction of egos with at least x distinct alters)`, starting at x = 0.
    pub ccdf: Vec<(usize, f64)>,
    /// Optimal circle count -> number of egos.
    pub circles_histogram: BTreeMap<usize, usize>,
}

pub fn ego_layer_stats(input: &EgoInput<'_>) -> EgoLayerStats {
    let counts = input.network.layer_sizes().to_vec();
    let mean_weights = input
        .network
        .layers()
        .map(|layer| (!layer.is_empty()).then(|| layer.iter().map(|(_, w)| w).sum::<f64>() / layer.len() as f64))
        .collect();
    let distinct: BTreeSet<&AlterId> = input.samples.iter().map(|s| &s.alter).collect();
    let weights: Vec<f64> = input.samples.iter().map(|s| s.weight).collect();
    EgoLayerStats {
        ego: input.ego.to_string(),
        counts,
        mean_weights,
        distinct_alters: distinct.len(),
        optimal_circles: optimal_circles(&weights).ok(),
    }
}

/// Aggregates per-layer counts and weights, the distinct-alter CCDF and the
/// optimal-circles histogram. Each ego is analysed on its own data.
pub fn structure_report(egos: &[EgoInput<'_>]) -> StructureReport {
    let per_ego: Vec<EgoLayerStats> = egos.iter().map(ego_layer_stats).collect();
    let l = per_ego.iter().map(|e| e.counts.len()).max().unwrap_or(0);

    let mut mean_counts = vec![0.0; l];
    let mut weight_sums = vec![(0.0, 0usize); l];
    for e in &per_ego {
        for i in 0..e.counts.len() {
            mean_counts[i] += e.counts[i] as f64;
            if let Some(w) = e.mean_weights[i] {
                weight_sums[i].0 += w;
                weight_sums[i].1 += 1;
            }
        }
    }
    if !per_ego.is_empty() {
        mean_counts.iter_mut().for_each(|c| *c /= per_ego.len() as f64);
    }
    let mean_weights = weight_sums
        .into_iter()
        .map(|(s, n)| (n > 0).then(|| s / n as f64))
        .collect();

    let sizes: Vec<usize> = per_ego.iter().map(|e| e.distinct_alters).collect();
    let mut xs: BTreeSet<usize> = sizes.iter().copied().collect();
    xs.insert(0);
    let ccdf = xs
        .into_iter()
        .map(|x| {
            let frac = if sizes.is_empty() {
                1.0
            } else {
                sizes.iter().filter(|&&s| s >= x).count() as f64 / sizes.len() as f64
            };
            (x, frac)
        })
        .collect();

    let mut circles_histogram = BTreeMap::new();
    for c in per_ego.iter().filter_map(|e| e.optimal_circles) {
        *circles_histogram.entry(c).or_insert(0) += 1;
    }

    StructureReport {
        per_ego,
        mean_counts,
        mean_weights,
        ccdf,
        circles_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(k: &str, w: f64) -> WeightSample {
        WeightSample {
            ego: "e".into(),
            alter: AlterId::person(k).unwrap(),
            weight: w,
            truth_tag: None,
        }
    }

    fn network(samples: &[WeightSample], l: usize) -> EgoNetwork {
        let mut top: Vec<_> = samples.iter().map(|s| (s.alter.clone(), s.weight)).collect();
        top.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        EgoNetwork::build(top, 150, l)
    }

    #[test]
    fn single_ego_counts_and_means() {
        let s = [sample("a", 10.0), sample("b", 9.0), sample("c", 1.0)];
        let n = network(&s, 2);
        let r = structure_report(&[EgoInput {
            ego: "e",
            network: &n,
            samples: &s,
        }]);
        assert_eq!(r.per_ego[0].counts, [2, 1]);
        assert_eq!(r.per_ego[0].mean_weights, [Some(9.5), Some(1.0)]);
        assert_eq!(r.mean_counts, [2.0, 1.0]);
        assert_eq!(r.ccdf[0], (0, 1.0));
    }

    #[test]
    fn single_alter_ego() {
        let s = [sample("a", 3.0)];
        let n = network(&s, 4);
        let r = structure_report(&[EgoInput {
            ego: "e",
            network: &n,
            samples: &s,
        }]);
        assert_eq!(r.per_ego[0].counts, [1, 0, 0, 0]);
        assert_eq!(r.circles_histogram.get(&1), Some(&1));
    }

    #[test]
    fn ccdf_over_several_egos() {
        let a = [sample("a", 1.0)];
        let b = [sample("a", 1.0), sample("b", 2.0), sample("c", 5.0)];
        let (na, nb) = (network(&a, 2), network(&b, 2));
        let r = structure_report(&[
            EgoInput {
                ego: "x",
                network: &na,
                samples: &a,
            },
            EgoInput {
                ego: "y",
                network: &nb,
                samples: &b,
            },
        ]);
        assert_eq!(r.ccdf, [(0, 1.0), (1, 1.0), (3, 0.5)]);
    }

    proptest! {
        #[test]
        fn per_ego_invariants(ws in prop::collection::vec(0.0f64..1e3, 1..60), l in 1usize..6) {
            let s: Vec<_> = ws.iter().enumerate().map(|(i, &w)| sample(&format!("a{i}"), w)).collect();
            let n = network(&s, l);
            let r = structure_report(&[EgoInput { ego: "e", network: &n, samples: &s }]);
            let means: Vec<f64> = r.per_ego[0].mean_weights.iter().flatten().copied().collect();
            prop_assert!(means.windows(2).all(|m| m[0] > m[1]));
            prop_assert!(r.ccdf.windows(2).all(|c| c[0].1 >= c[1].1));
            prop_assert_eq!(r.ccdf[0].1, 1.0);
        }
    }
}
