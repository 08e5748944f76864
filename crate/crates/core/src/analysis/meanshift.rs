//! Optimal number of circles: mode count of a 1-D flat-kernel mean shift.

use crate::error::{Error, Result};

/// Fraction of the sample used as neighbourhood size for the bandwidth.
pub const BANDWIDTH_QUANTILE: f64 = 0.3;

const MAX_ITERATIONS: usize = 500;

/// Mean, over all points, of each point's mean distance to its
/// `⌈0.3 · n⌉` nearest neighbours.
pub fn estimate_bandwidth(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n < 2 {
        return 0.0;
    }
    let k = ((BANDWIDTH_QUANTILE * n as f64).ceil() as usize).clamp(1, n - 1);
    let mut total = 0.0;
    for i in 0..n {
        // walk outwards from i, always taking the closer side
        let (mut lo, mut hi) = (i, i);
        let mut sum = 0.0;
        for _ in 0..k {
            let left = (lo > 0).then(|| sorted[i] - sorted[lo - 1]);
            let right = (hi + 1 < n).then(|| sorted[hi + 1] - sorted[i]);
            match (left, right) {
                (Some(l), Some(r)) if l <= r => {
                    sum += l;
                    lo -= 1;
                }
                (_, Some(r)) => {
                    sum += r;
                    hi += 1;
                }
                (Some(l), None) => {
                    sum += l;
                    lo -= 1;
                }
                (None, None) => unreachable!("k < n"),
            }
        }
        total += sum / k as f64;
    }
    total / n as f64
}

/// Converged mean-shift modes (ascending) after merging modes closer than
/// half the bandwidth.
pub fn mean_shift_modes(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::validation("weights must be finite"));
    }
    let mut sorted = weights.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();

    let h = estimate_bandwidth(&sorted);
    if h <= 0.0 {
        return Ok(distinct);
    }

    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    prefix.push(0.0);
    for &w in &sorted {
        prefix.push(prefix.last().unwrap() + w);
    }
    let window_mean = |x: f64| {
        let lo = sorted.partition_point(|&v| v < x - h);
        let hi = sorted.partition_point(|&v| v <= x + h);
        (prefix[hi] - prefix[lo]) / (hi - lo) as f64
    };

    let mut modes: Vec<f64> = distinct
        .iter()
        .map(|&seed| {
            let mut x = seed;
            for _ in 0..MAX_ITERATIONS {
                let next = window_mean(x);
                let shift = (next - x).abs();
                x = next;
                if shift <= 1e-9 * h {
                    break;
                }
            }
            x
        })
        .collect();
    modes.sort_by(f64::total_cmp);

    let mut merged: Vec<f64> = Vec::new();
    for m in modes {
        match merged.last() {
            Some(&last) if m - last < h / 2.0 => {}
            _ => merged.push(m),
        }
    }
    Ok(merged)
}

/// Number of layers suggested by the modes of the weight distribution.
pub fn optimal_circles(weights: &[f64]) -> Result<usize> {
    Ok(mean_shift_modes(weights)?.len().max(1))
}
