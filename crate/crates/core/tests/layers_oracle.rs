mod common;

use common::{brute_force_layer_sizes, XorShift};
use egonet::layer_sizes;

#[test]
fn matches_brute_force_on_small_integer_multisets() {
    let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);
    for _ in 0..2000 {
        let n = 1 + rng.below(12) as usize;
        let l = 1 + rng.below(6) as usize;
        let mut w: Vec<f64> = (0..n).map(|_| (1 + rng.below(20)) as f64).collect();
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(
            layer_sizes(&w, l),
            brute_force_layer_sizes(&w, l),
            "weights {w:?}, l = {l}"
        );
    }
}

#[test]
fn matches_brute_force_on_real_valued_weights() {
    let mut rng = XorShift(42);
    for _ in 0..500 {
        let n = 1 + rng.below(10) as usize;
        let l = 1 + rng.below(5) as usize;
        let mut w: Vec<f64> = (0..n).map(|_| (rng.below(1_000_000) as f64) / 7.0).collect();
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(
            layer_sizes(&w, l),
            brute_force_layer_sizes(&w, l),
            "weights {w:?}, l = {l}"
        );
    }
}
