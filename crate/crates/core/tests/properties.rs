//! Randomised properties checked against independent oracles.

mod common;

use common::RecomputeOracle;
use egonet::analysis::{estimate_bandwidth, mean_shift_modes, optimal_circles};
use egonet::ingest::{generate_world, replay, SyntheticWorldSpec};
use egonet::{ActiveWeight, AlterId, EgoState, EngineConfig, RunConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incremental_update_matches_recompute(
        eta in 1usize..12,
        l in 1usize..5,
        steps in prop::collection::vec((0usize..15, 0u8..4, 0i64..3), 1..120),
    ) {
        let l = l.min(eta);
        let mut state = EgoState::new(EngineConfig::new(eta, l).unwrap()).unwrap();
        let mut oracle = RecomputeOracle::default();
        let mut weights = [0.0f64; 15];
        let mut ts = 0;
        for (alter, inc, dt) in steps {
            ts += dt;
            weights[alter] += inc as f64;
            let batch = [ActiveWeight::new(AlterId::device(format!("d{alter}")).unwrap(), weights[alter], 1, ts)];
            let (net, _) = state.update(&batch).unwrap();
            oracle.apply(&batch);
            prop_assert_eq!(&*net, &oracle.network(eta, l));
        }
        prop_assert!(state.check().is_ok());
    }

    #[test]
    fn separated_clusters_give_one_mode_each(
        k in 4usize..=6,
        m in 3usize..12,
        jitter in prop::collection::vec(0.0f64..1.0, 72),
        scale in 0.01f64..100.0,
    ) {
        // k groups, 1000 units apart, each point within 1 unit of its centre;
        // with k >= 4 every 30% neighbourhood reaches into another group, so
        // the bandwidth reflects the group spacing rather than the jitter
        let w: Vec<f64> = (0..k * m).map(|i| scale * (1000.0 * (i / m) as f64 + jitter[i % 72])).collect();
        prop_assert_eq!(optimal_circles(&w).unwrap(), k);
        let modes = mean_shift_modes(&w).unwrap();
        for (i, mode) in modes.iter().enumerate() {
            let centre = scale * 1000.0 * i as f64;
            prop_assert!((mode - centre).abs() <= scale * 1.0 + 1e-9, "mode {} far from group {}", mode, i);
        }
    }

    #[test]
    fn bandwidth_matches_direct_definition(ws in prop::collection::vec(-50.0f64..50.0, 2..40)) {
        let mut sorted = ws.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let k = ((0.3 * n as f64).ceil() as usize).clamp(1, n - 1);
        let direct: f64 = sorted
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut d: Vec<f64> = sorted.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, y)| (x - y).abs()).collect();
                d.sort_by(f64::total_cmp);
                d[..k].iter().sum::<f64>() / k as f64
            })
            .sum::<f64>()
            / n as f64;
        let got = estimate_bandwidth(&sorted);
        prop_assert!((got - direct).abs() <= 1e-9 * direct.max(1.0), "{} vs {}", got, direct);
    }
}

#[test]
fn parallel_replay_equals_per_ego_replay() {
    let world = generate_world(&SyntheticWorldSpec {
        n_egos: 4,
        duration_days: 2,
        seed: 11,
        ..Default::default()
    })
    .unwrap();
    let config = RunConfig::default();
    let all = replay(&world.events, &config).unwrap();
    let mut separate = Vec::new();
    for ego in ["u0", "u1", "u2", "u3"] {
        let mine: Vec<_> = world.events.iter().filter(|e| e.ego == ego).cloned().collect();
        separate.extend(replay(&mine, &config).unwrap().rows);
    }
    assert_eq!(all.rows, separate);
    assert_eq!(all.stats.events as usize, world.events.len());
}
