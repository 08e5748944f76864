//! Layered ego networks: the top of a ranking partitioned into concentric
//! layers by 1-D clustering of the alters' weights.
//!
//! The partition minimises the total within-layer sum of squared deviations
//! over contiguous groupings of the sorted weights. Equal weights are never
//! split, so a run of identical weights always lands in a single layer and
//! fewer than `num_layers` layers are populated when there are fewer distinct
//! weights. Ties between equally good partitions resolve towards the smallest
//! inner layers.
//!
//! The optimum is found with a dynamic program over distinct weight values;
//! each level's row minima are located by divide and conquer, using the
//! monotonicity of optimal split points for this cost. For `n` distinct
//! values and `l` layers this is `O(l · n log n)`.

use serde::{Deserialize, Serialize};

use crate::alter::AlterId;

/// Sizes of each layer (innermost first, always `num_layers` entries) for
/// weights already sorted in descending order.
pub fn layer_sizes(sorted_desc: &[f64], num_layers: usize) -> Vec<usize> {
    debug_assert!(
        sorted_desc.windows(2).all(|w| w[0] >= w[1]),
        "weights must be sorted descending"
    );
    let mut sizes = vec![0; num_layers];
    if sorted_desc.is_empty() || num_layers == 0 {
        return sizes;
    }

    let groups = Groups::new(sorted_desc);
    let k = num_layers.min(groups.len());
    for (layer, (start, end)) in groups.optimal_cuts(k).into_iter().enumerate() {
        sizes[layer] = groups.offsets[end] - groups.offsets[start];
    }
    sizes
}

/// Clusters an arbitrary multiset of weights into `num_layers` layers,
/// innermost (heaviest) first. Outer layers are empty when there are fewer
/// distinct weights than layers.
pub fn build_layers(weights: &[f64], num_layers: usize) -> Vec<Vec<f64>> {
    let mut sorted = weights.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let sizes = layer_sizes(&sorted, num_layers);
    let mut rest = sorted.as_slice();
    sizes
        .into_iter()
        .map(|n| {
            let (head, tail) = rest.split_at(n);
            rest = tail;
            head.to_vec()
        })
        .collect()
}

/// Distinct weights with multiplicities and centred prefix sums.
struct Groups {
    // offsets[i] = number of raw weights before group i
    offsets: Vec<usize>,
    s1: Vec<f64>,
    s2: Vec<f64>,
    tol: f64,
}

impl Groups {
    fn new(sorted_desc: &[f64]) -> Self {
        let mean = sorted_desc.iter().sum::<f64>() / sorted_desc.len() as f64;
        let mut offsets = vec![0];
        let mut s1 = vec![0.0];
        let mut s2 = vec![0.0];
        let mut i = 0;
        while i < sorted_desc.len() {
            let v = sorted_desc[i];
            let mut j = i;
            while j < sorted_desc.len() && sorted_desc[j] == v {
                j += 1;
            }
            let c = (j - i) as f64;
            let x = v - mean;
            offsets.push(j);
            s1.push(s1.last().unwrap() + c * x);
            s2.push(s2.last().unwrap() + c * x * x);
            i = j;
        }
        let total = *s2.last().unwrap();
        Groups {
            offsets,
            s1,
            s2,
            tol: 1e-12 * total.max(1.0),
        }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Sum of squared deviations of groups `[i, j)`.
    fn cost(&self, i: usize, j: usize) -> f64 {
        let c = (self.offsets[j] - self.offsets[i]) as f64;
        let s1 = self.s1[j] - self.s1[i];
        let s2 = self.s2[j] - self.s2[i];
        (s2 - s1 * s1 / c).max(0.0)
    }

    /// Group ranges of the optimal partition into exactly `k` parts.
    fn optimal_cuts(&self, k: usize) -> Vec<(usize, usize)> {
        let g = self.len();
        // best[i] = optimal cost of groups [i, g) split into the current number of parts
        let mut best: Vec<f64> = (0..g).map(|i| self.cost(i, g)).collect();
        // next_cut[parts][i] = end of the first part when [i, g) uses `parts` parts
        let mut next_cut: Vec<Vec<usize>> = vec![Vec::new(), vec![g; g]];

        for parts in 2..=k {
            let last_start = g - parts;
            let mut cur = vec![f64::INFINITY; g];
            let mut cut = vec![g; g];
            let rows = if parts == k { 0..=0 } else { 0..=last_start };
            self.solve_rows(
                &best,
                parts,
                *rows.start(),
                *rows.end(),
                1,
                g - parts + 1,
                &mut cur,
                &mut cut,
            );
            best = cur;
            next_cut.push(cut);
        }

        let mut ranges = Vec::with_capacity(k);
        let mut start = 0;
        for parts in (1..=k).rev() {
            let end = next_cut[parts][start];
            ranges.push((start, end));
            start = end;
        }
        ranges
    }

    #[allow(clippy::too_many_arguments, clippy::needless_range_loop)]
    fn solve_rows(
        &self,
        prev: &[f64],
        parts: usize,
        lo: usize,
        hi: usize,
        cut_lo: usize,
        cut_hi: usize,
        cur: &mut [f64],
        cut: &mut [usize],
    ) {
        if lo > hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let from = cut_lo.max(mid + 1);
        let to = cut_hi.min(self.len() - parts + 1);
        let mut best_val = f64::INFINITY;
        let mut best_cut = from;
        for p in from..=to {
            let v = self.cost(mid, p) + prev[p];
            if v < best_val - self.tol {
                best_val = v;
                best_cut = p;
            }
        }
        cur[mid] = best_val;
        cut[mid] = best_cut;
        if mid > lo {
            self.solve_rows(prev, parts, lo, mid - 1, cut_lo, best_cut, cur, cut);
        }
        self.solve_rows(prev, parts, mid + 1, hi, best_cut, cut_hi, cur, cut);
    }
}

/// Immutable snapshot of an ego's layered network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoNetwork {
    eta: usize,
    num_layers: usize,
    /// The top-`eta` `(alter, weight)` pairs this network was built from, in rank order.
    built_from: Vec<(AlterId, f64)>,
    layer_sizes: Vec<usize>,
}

impl EgoNetwork {
    pub fn empty(eta: usize, num_layers: usize) -> Self {
        EgoNetwork {
            eta,
            num_layers,
            built_from: Vec::new(),
            layer_sizes: vec![0; num_layers],
        }
    }

    /// Builds the layers from the top of a ranking (rank order, at most `eta` entries).
    pub fn build(top: Vec<(AlterId, f64)>, eta: usize, num_layers: usize) -> Self {
        debug_assert!(top.len() <= eta);
        let weights: Vec<f64> = top.iter().map(|(_, w)| *w).collect();
        let layer_sizes = layer_sizes(&weights, num_layers);
        EgoNetwork {
            eta,
            num_layers,
            built_from: top,
            layer_sizes,
        }
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn num_layers(&self) -> usize {
        self.num_layers
    }

    pub fn built_from(&self) -> &[(AlterId, f64)] {
        &self.built_from
    }

    pub fn len(&self) -> usize {
        self.built_from.len()
    }

    pub fn is_empty(&self) -> bool {
        self.built_from.is_empty()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn non_empty_layers(&self) -> usize {
        self.layer_sizes.iter().filter(|&&n| n > 0).count()
    }

    /// Members of layer `index` (0-based, innermost first).
    pub fn layer(&self, index: usize) -> &[(AlterId, f64)] {
        let start: usize = self.layer_sizes[..index].iter().sum();
        &self.built_from[start..start + self.layer_sizes[index]]
    }

    pub fn layers(&self) -> impl Iterator<Item = &[(AlterId, f64)]> + '_ {
        (0..self.num_layers).map(move |i| self.layer(i))
    }

    /// 1-based layer of `id`, or `None` when the alter is outside the network.
    pub fn layer_of(&self, id: &AlterId) -> Option<usize> {
        let pos = self.built_from.iter().position(|(a, _)| a == id)?;
        let mut end = 0;
        for (i, &n) in self.layer_sizes.iter().enumerate() {
            end += n;
            if pos < end {
                return Some(i + 1);
            }
        }
        unreachable!("layer sizes cover every member")
    }
}
