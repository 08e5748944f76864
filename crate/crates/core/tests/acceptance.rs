//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use common::{
    brute_force_layer_sizes, shift, warm_three_alter_scenario, RecomputeOracle, XorShift, SCENARIO_WINDOW_START,
};
use egonet::analysis::optimal_circles;
use egonet::bench::{run_bench, BenchConfig, PLATEAU_TOLERANCE};
use egonet::commands::{analyze_state, cmd_run, RunArgs};
use egonet::ingest::{
    generate_world, layered_weight_population, replay, write_events, LayeredPopulationSpec, Replayer,
    SyntheticWorldSpec,
};
use egonet::places::geo::{GeoClusterer, GpsFix};
use egonet::places::proximity::proximity_weight_update;
use egonet::{build_layers, layer_sizes, snapshot, ActiveWeight, AlterId, EgoState, EngineConfig, RunConfig};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

/// Criterion 1: the incremental update never diverges from a full recompute.
fn skip_condition_soundness() -> Outcome {
    let mut rng = XorShift(0x5eed_1234_abcd_0001);
    let (mut skipped, mut updates) = (0u64, 0u64);
    for seq in 0..1000 {
        let eta = [5, 10, 150][seq % 3];
        let l = 1 + rng.below(eta.min(6) as u64) as usize;
        let n_alters = 1 + rng.below(50) as usize;
        let n_events = 1 + rng.below(500) as usize;
        let mut state = EgoState::new(EngineConfig::new(eta, l).unwrap()).unwrap();
        let mut oracle = RecomputeOracle::default();
        let mut weights = vec![0.0f64; n_alters];
        let mut ts = 0i64;
        for ev in 0..n_events {
            ts += rng.below(3) as i64;
            let mut batch: Vec<ActiveWeight> = Vec::new();
            for _ in 0..1 + rng.below(3) {
                let a = rng.below(n_alters as u64) as usize;
                if batch.iter().any(|b| b.id.key() == format!("a{a}")) {
                    continue;
                }
                // small integer increments make weight ties common
                weights[a] += rng.below(3) as f64;
                batch.push(ActiveWeight::new(
                    AlterId::person(format!("a{a}")).unwrap(),
                    weights[a],
                    1,
                    ts,
                ));
            }
            let before = state.rebuilds();
            let (net, _) = state.update(&batch).map_err(|e| e.to_string())?;
            oracle.apply(&batch);
            updates += 1;
            skipped += (state.rebuilds() == before) as u64;
            let want = oracle.network(eta, l);
            ensure!(
                *net == want,
                "sequence {seq} event {ev}: incremental network differs from recompute"
            );
        }
    }
    ensure!(skipped > 0, "the skip path was never exercised");
    Ok(format!(
        "{updates} updates, {skipped} skipped rebuilds, all equal to recompute"
    ))
}

/// Criterion 2: layers equal the brute-force optimal contiguous partition.
fn layer_oracle() -> Outcome {
    let mut rng = XorShift(0x1a7e_5eed_0000_0002);
    for case in 0..10_000 {
        let n = 1 + rng.below(12) as usize;
        let l = 1 + rng.below(6) as usize;
        let ws: Vec<f64> = (0..n).map(|_| 1.0 + rng.below(20) as f64).collect();
        let mut sorted = ws.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let got = layer_sizes(&sorted, l);
        let want = brute_force_layer_sizes(&ws, l);
        ensure!(
            got == want,
            "case {case}: weights {ws:?}, l={l}: got {got:?}, brute force {want:?}"
        );
        let mut shuffled = ws.clone();
        shuffled.reverse();
        let again: Vec<usize> = build_layers(&shuffled, l).iter().map(Vec::len).collect();
        ensure!(again == got, "case {case}: input order changed the partition");
    }
    Ok("10000 cases equal to brute force, order independent".into())
}

/// Criterion 3: the warmed scenario gives [0, 1/3, 1/3, 1/3].
fn warm_scenario() -> Outcome {
    let out = replay(&warm_three_alter_scenario(), &RunConfig::default()).map_err(|e| e.to_string())?;
    let row = out
        .rows
        .iter()
        .find(|r| r.window_end == SCENARIO_WINDOW_START + 60_000)
        .ok_or("scenario window missing")?;
    let third = 1.0 / 3.0;
    let want = [0.0, third, third, third];
    let ulps = |a: f64, b: f64| (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs();
    ensure!(
        row.sc.len() == 4 && row.sc.iter().zip(want).all(|(a, b)| ulps(*a, b) <= 1),
        "SC = {:?}",
        row.sc
    );
    ensure!(row.active_count == 3, "active count {}", row.active_count);
    Ok(format!("SC = {:?}", row.sc))
}

/// Criterion 4: three sightings give 1 -> 241 -> 243.
fn contact_weight_trace() -> Outcome {
    let s = 1000;
    let r0 = proximity_weight_update(None, 0, 300 * s).map_err(|e| e.to_string())?;
    let r1 = proximity_weight_update(Some(&r0), 120 * s, 300 * s).map_err(|e| e.to_string())?;
    let r2 = proximity_weight_update(Some(&r1), 1000 * s, 300 * s).map_err(|e| e.to_string())?;
    let got = [r0.weight, r1.weight, r2.weight];
    ensure!(got == [1.0, 241.0, 243.0], "weights {got:?}");
    ensure!(
        [r0.n_contacts, r1.n_contacts, r2.n_contacts] == [1, 1, 2],
        "contact counts off"
    );
    Ok("1 -> 241 -> 243".into())
}

/// Criterion 5: latency grows with eta, plateaus past eta, stays fast.
fn bench_shape() -> Outcome {
    let cfg = BenchConfig {
        etas: vec![150, 500, 1000],
        n_contacts: 20_000,
        n_alters: 5_000,
        force_rebuild: true,
        ..Default::default()
    };
    let report = run_bench(&cfg).map_err(|e| e.to_string())?;
    let mut means = Vec::new();
    for c in &report.curves {
        let m = c.post_plateau_mean_ms.ok_or(format!("eta {} never reached", c.eta))?;
        let post: Vec<f64> = c.post_plateau_buckets().map(|b| b.mean_ms).collect();
        let (lo, hi) = post
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        ensure!(
            c.plateau,
            "eta {}: no plateau; post-plateau bucket means span {lo:.4}..{hi:.4} ms (tolerance {PLATEAU_TOLERANCE}x)",
            c.eta
        );
        ensure!(
            c.buckets.iter().all(|b| b.mean_ms > 0.0),
            "eta {}: zero latency bucket",
            c.eta
        );
        means.push((c.eta, m));
    }
    ensure!(
        means.windows(2).all(|w| w[0].1 < w[1].1),
        "post-plateau means not increasing: {means:?}"
    );
    let m1000 = means.last().unwrap().1;
    ensure!(m1000 < 50.0, "eta 1000 post-plateau mean {m1000} ms");
    let desc: Vec<String> = means.iter().map(|(e, m)| format!("eta {e}: {m:.4} ms")).collect();
    Ok(desc.join(", "))
}

/// Criterion 6: strong ties fill the inner social layers.
fn semantic_layering() -> Outcome {
    let spec = SyntheticWorldSpec {
        n_egos: 20,
        seed: 6,
        ..Default::default()
    };
    ensure!(
        spec.rate_strong == 10.0 * spec.rate_weak,
        "generator rates are not 10x apart"
    );
    let world = generate_world(&spec).map_err(|e| e.to_string())?;
    let mut state = Replayer::new(RunConfig::default()).map_err(|e| e.to_string())?;
    state.process(&world.events).map_err(|e| e.to_string())?;
    state.finish().map_err(|e| e.to_string())?;
    let out = analyze_state(&state, Some(&world.truth)).map_err(|e| e.to_string())?;
    let social = out.networks.iter().find(|n| n.network == "social").unwrap();
    let sem = social.semantics.as_ref().ok_or("social semantics missing")?;
    ensure!(sem.per_ego.len() == 20, "{} egos evaluated", sem.per_ego.len());
    let fr: Vec<f64> = sem.mean_strong_fraction.iter().map(|f| f.unwrap_or(0.0)).collect();
    ensure!(fr.len() == 4, "{} social layers", fr.len());
    ensure!(fr[..3].iter().all(|&f| f >= 0.8), "Strong fraction per layer {fr:?}");
    Ok(format!(
        "Strong fraction per layer {:?}",
        fr.iter().map(|f| format!("{f:.3}")).collect::<Vec<_>>()
    ))
}

/// Criterion 7: four planted modes are recovered as the typical circle count.
fn circles_distribution() -> Outcome {
    let pop = layered_weight_population(&LayeredPopulationSpec::default()).map_err(|e| e.to_string())?;
    ensure!(pop.len() == 100, "{} egos", pop.len());
    let mut counts: Vec<usize> = pop.iter().map(|w| optimal_circles(w).unwrap()).collect();
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    counts.iter().for_each(|&c| *hist.entry(c).or_default() += 1);
    counts.sort_unstable();
    // even count: both middle values must be 4 for the median to be exactly 4
    let (m1, m2) = (counts[49], counts[50]);
    let argmax = hist
        .iter()
        .max_by_key(|(c, n)| (**n, std::cmp::Reverse(**c)))
        .map(|(c, _)| *c)
        .unwrap();
    ensure!(m1 == 4 && m2 == 4, "median {m1}/{m2}, histogram {hist:?}");
    ensure!(argmax == 4, "histogram argmax {argmax}, histogram {hist:?}");
    Ok(format!("median 4, histogram {hist:?}"))
}

/// Criterion 8: three well separated blobs give three clusters.
fn geo_blobs() -> Outcome {
    let origin = (45.46, 9.19);
    let centers = [origin, shift(origin, 1500.0, 0.0), shift(origin, 0.0, 2000.0)];
    let mut summary = Vec::new();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jitter = Normal::new(0.0, 20.0).unwrap();
        let mut geo = GeoClusterer::new(100.0, 300_000).unwrap();
        let mut t = 0;
        for _visit in 0..30 {
            let c = centers[rng.random_range(0..3)];
            for _ in 0..20 {
                let (lat, lon) = shift(c, jitter.sample(&mut rng), jitter.sample(&mut rng));
                geo.assign(&GpsFix::new(t, lat, lon).unwrap())
                    .map_err(|e| e.to_string())?;
                t += 60_000;
            }
        }
        ensure!(
            geo.clusters().len() == 3,
            "seed {seed}: {} clusters",
            geo.clusters().len()
        );
        ensure!(geo.stored_fix_count() == 0, "seed {seed}: fixes retained");
        summary.push(geo.clusters().iter().map(|c| c.n_fixes).sum::<u64>());
    }
    Ok(format!(
        "20 traces x {} fixes, 3 clusters each, 0 stored fixes",
        summary[0]
    ))
}

/// Criterion 9: identical runs give identical bytes; a snapshot split is
/// invisible.
fn determinism_and_persistence() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = SyntheticWorldSpec {
        n_egos: 3,
        duration_days: 2,
        seed: 9,
        ..Default::default()
    };
    let world = generate_world(&spec).map_err(|e| e.to_string())?;
    let events_path = dir.path().join("events.jsonl");
    write_events(
        std::fs::File::create(&events_path).map_err(|e| e.to_string())?,
        &world.events,
    )
    .map_err(|e| e.to_string())?;

    let run = |out: &str| {
        let args = RunArgs {
            events: events_path.clone(),
            out: dir.path().join(out),
            ..Default::default()
        };
        cmd_run(&args).map_err(|e| e.to_string())?;
        std::fs::read(dir.path().join(out).join("features.csv")).map_err(|e| e.to_string())
    };
    let (a, b) = (run("a")?, run("b")?);
    ensure!(!a.is_empty() && a == b, "features.csv differs between identical runs");

    // library level: snapshot mid-stream, reload, continue
    let split = world.events.len() / 2;
    let (head, tail) = world.events.split_at(split);
    let mut straight = Replayer::new(RunConfig::default()).unwrap();
    let mut straight_rows = straight.process(head).map_err(|e| e.to_string())?;
    let mut resumed = snapshot::from_json(&snapshot::to_json(&straight)).map_err(|e| e.to_string())?;
    ensure!(resumed == straight, "loaded snapshot differs from saved state");
    straight_rows.extend(straight.process(tail).map_err(|e| e.to_string())?);
    resumed.process(tail).map_err(|e| e.to_string())?;
    ensure!(resumed == straight, "state after resume differs from straight-through");
    ensure!(
        snapshot::to_json(&resumed) == snapshot::to_json(&straight),
        "snapshot bytes differ after the same update"
    );

    // command level: run the head with --save-snapshot, resume with the tail
    let head_path = dir.path().join("head.jsonl");
    let tail_path = dir.path().join("tail.jsonl");
    write_events(std::fs::File::create(&head_path).unwrap(), head).unwrap();
    write_events(std::fs::File::create(&tail_path).unwrap(), tail).unwrap();
    let snap = dir.path().join("state.json");
    cmd_run(&RunArgs {
        events: head_path,
        out: dir.path().join("h"),
        save_snapshot: Some(snap.clone()),
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    cmd_run(&RunArgs {
        events: tail_path,
        out: dir.path().join("t"),
        resume: Some(snap),
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let read = |p: &str| std::fs::read_to_string(dir.path().join(p).join("features.csv")).unwrap();
    let whole = String::from_utf8(a).unwrap();
    let (h, t) = (read("h"), read("t"));
    let mut split_lines: Vec<&str> = h.lines().skip(1).chain(t.lines().skip(1)).collect();
    let mut whole_lines: Vec<&str> = whole.lines().skip(1).collect();
    split_lines.sort_unstable();
    whole_lines.sort_unstable();
    ensure!(
        split_lines == whole_lines,
        "split run rows differ from the straight run"
    );
    Ok(format!(
        "{} identical bytes; {} rows equal across a snapshot split",
        b.len(),
        whole_lines.len()
    ))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("1 skip-condition soundness", skip_condition_soundness),
        ("2 layer construction oracle", layer_oracle),
        ("3 warmed three-alter scenario", warm_scenario),
        ("4 contact weight trace", contact_weight_trace),
        ("5 benchmark shape", bench_shape),
        ("6 semantic layering", semantic_layering),
        ("7 optimal-circles distribution", circles_distribution),
        ("8 geo-clusterer blobs", geo_blobs),
        ("9 determinism and persistence", determinism_and_persistence),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                println!("FAIL  criterion {name} ({secs:.1}s): {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
