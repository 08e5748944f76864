//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use egonet::{ActiveWeight, AlterId, EgoNetwork};

/// Layer sizes of the minimum within-cluster sum of squares partition, found
/// by enumerating every contiguous split of the descending weights into
/// `min(l, distinct)` parts. Among optimal partitions (within a relative
/// 1e-9), the one whose boundaries are lexicographically smallest from the
/// inside out wins.
pub fn brute_force_layer_sizes(weights: &[f64], l: usize) -> Vec<usize> {
    let mut w = weights.to_vec();
    w.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let n = w.len();
    let mut out = vec![0; l];
    if n == 0 {
        return out;
    }
    let mut distinct = w.clone();
    distinct.dedup();
    let k = l.min(distinct.len());

    let sse = |s: &[f64]| {
        let m = s.iter().sum::<f64>() / s.len() as f64;
        s.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
    };
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut cuts: Vec<usize> = Vec::new();
    fn rec(start: usize, left: usize, n: usize, cuts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left == 1 {
            f(cuts);
            return;
        }
        for c in start + 1..=n - (left - 1) {
            cuts.push(c);
            rec(c, left - 1, n, cuts, f);
            cuts.pop();
        }
    }
    let scale = sse(&w).max(1.0);
    rec(0, k, n, &mut cuts, &mut |cuts: &[usize]| {
        let mut b = vec![0];
        b.extend_from_slice(cuts);
        b.push(n);
        let cost: f64 = b.windows(2).map(|x| sse(&w[x[0]..x[1]])).sum();
        let better = match &best {
            None => true,
            Some((c, _)) => cost < c - 1e-9 * scale,
        };
        if better {
            best = Some((cost, cuts.to_vec()));
        }
    });
    let (_, cuts) = best.unwrap();
    let mut b = vec![0];
    b.extend(cuts);
    b.push(n);
    for (i, x) in b.windows(2).enumerate() {
        out[i] = x[1] - x[0];
    }
    out
}

/// Recomputes the network from a plain map of alter state: sort with the
/// ranking rule, take the top `eta`, cluster.
#[derive(Default)]
pub struct RecomputeOracle {
    state: HashMap<AlterId, (f64, i64)>,
}

impl RecomputeOracle {
    pub fn apply(&mut self, active: &[ActiveWeight]) {
        for a in active {
            self.state.insert(a.id.clone(), (a.weight, a.last_seen));
        }
    }

    pub fn network(&self, eta: usize, l: usize) -> EgoNetwork {
        let mut all: Vec<_> = self.state.iter().map(|(id, &(w, t))| (id.clone(), w, t)).collect();
        all.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap()
                .then(b.2.cmp(&a.2))
                .then(a.0.key().cmp(b.0.key()))
                .then(a.0.kind().cmp(&b.0.kind()))
        });
        all.truncate(eta);
        EgoNetwork::build(all.into_iter().map(|(id, w, _)| (id, w)).collect(), eta, l)
    }
}

/// Small xorshift generator so oracles do not share the crate's RNG path.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

use egonet::alter::DeviceClass;
use egonet::ingest::{EventEnvelope, EventType};

/// Start of the final window in [`warm_three_alter_scenario`].
pub const SCENARIO_WINDOW_START: i64 = 3_600_000;

/// A warmed-up social network followed by one window in which two
/// colleagues are in Bluetooth range and a rarely contacted friend sends a
/// message. Warm-up call counts are chosen so the four layers are exactly
/// {family}, {colleague 1}, {colleague 2}, {friend and acquaintances}.
pub fn warm_three_alter_scenario() -> Vec<EventEnvelope> {
    let plan = [
        ("family", 100),
        ("colleague1", 40),
        ("colleague2", 15),
        ("friend", 2),
        ("acq1", 1),
        ("acq2", 2),
        ("acq3", 3),
    ];
    let mut events = Vec::new();
    let mut ts = 0;
    for (who, calls) in plan {
        for _ in 0..calls {
            events.push(EventEnvelope::interaction("ego", ts, EventType::Call, who));
            ts += 5_000;
        }
    }
    assert!(ts < SCENARIO_WINDOW_START);
    let t = SCENARIO_WINDOW_START;
    events.push(EventEnvelope::sighting(
        "ego",
        t + 1_000,
        EventType::Bt,
        "colleague1",
        -50,
        DeviceClass::PersonalMobile,
    ));
    events.push(EventEnvelope::sighting(
        "ego",
        t + 2_000,
        EventType::Bt,
        "colleague2",
        -55,
        DeviceClass::PersonalMobile,
    ));
    events.push(EventEnvelope::interaction("ego", t + 3_000, EventType::Sms, "friend"));
    events
}

/// Moves a point by `north`/`east` meters on a spherical earth.
pub fn shift(p: (f64, f64), north: f64, east: f64) -> (f64, f64) {
    let r = 6_371_008.8_f64;
    let dlat = (north / r).to_degrees();
    let dlon = (east / (r * p.0.to_radians().cos())).to_degrees();
    (p.0 + dlat, p.1 + dlon)
}
