//! Seeded synthetic workloads.
//!
//! * [`generate_benchmark`]: random contacts between one ego and a fixed
//!   population of alters, for latency measurements.
//! * [`generate_world`]: egos with planted strong and weak social ties,
//!   familiar and transient devices and home/work GPS anchors, plus the
//!   ground-truth tags of every alter.
//! * [`layered_weight_population`]: per-ego weight lists drawn from a few
//!   log-spaced modes, for checking circle discovery.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::alter::{DeviceClass, Millis};
use crate::analysis::{TruthTag, TruthTags};
use crate::error::{Error, Result};
use crate::ingest::envelope::{EventEnvelope, EventType};

/// Start of every synthetic timeline (a UTC midnight).
pub const EPOCH_START: Millis = 1_600_041_600_000;
const DAY: Millis = 86_400_000;
const MINUTE: Millis = 60_000;
const METERS_PER_DEG_LAT: f64 = 111_195.0;

/// `n_contacts` sightings of alters drawn uniformly from `n_alters`, with
/// strictly increasing timestamps 1–120 s apart.
pub fn generate_benchmark(n_contacts: usize, n_alters: usize, seed: u64) -> Result<Vec<EventEnvelope>> {
    if n_contacts == 0 || n_alters == 0 {
        return Err(Error::validation("n_contacts and n_alters must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ts = EPOCH_START;
    Ok((0..n_contacts)
        .map(|_| {
            ts += rng.random_range(1..=120) * 1000;
            let alter = rng.random_range(0..n_alters);
            EventEnvelope::sighting(
                "bench",
                ts,
                EventType::Bt,
                &format!("d{alter}"),
                -50,
                DeviceClass::AccessPoint,
            )
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticWorldSpec {
    pub n_egos: usize,
    pub n_strong_alters: usize,
    pub n_weak_alters: usize,
    /// Mean interactions per day with each strong / weak alter.
    pub rate_strong: f64,
    pub rate_weak: f64,
    /// Log-normal sigma of each alter's personal rate multiplier.
    pub rate_dispersion: f64,
    pub n_home_devices: usize,
    pub n_transient_devices: usize,
    pub home: (f64, f64),
    pub work: (f64, f64),
    pub gps_jitter_m: f64,
    /// Minutes between GPS fixes; 0 disables GPS.
    pub gps_interval_min: u32,
    /// Minutes between proximity scans; 0 disables scanning.
    pub scan_interval_min: u32,
    pub duration_days: u32,
    pub seed: u64,
}

impl Default for SyntheticWorldSpec {
    fn default() -> Self {
        SyntheticWorldSpec {
            n_egos: 1,
            n_strong_alters: 30,
            n_weak_alters: 100,
            rate_strong: 3.0,
            rate_weak: 0.3,
            rate_dispersion: 0.4,
            n_home_devices: 4,
            n_transient_devices: 200,
            home: (45.4642, 9.1900),
            work: (45.4781, 9.2275),
            gps_jitter_m: 20.0,
            gps_interval_min: 15,
            scan_interval_min: 5,
            duration_days: 14,
            seed: 1,
        }
    }
}

impl SyntheticWorldSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate_strong > 0.0 && self.rate_weak > 0.0) {
            return Err(Error::validation("interaction rates must be positive"));
        }
        if !(self.rate_dispersion >= 0.0 && self.gps_jitter_m >= 0.0) {
            return Err(Error::validation("dispersion and jitter must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticWorld {
    /// Sorted by timestamp; ties keep generation order.
    pub events: Vec<EventEnvelope>,
    pub truth: TruthTags,
}

impl SyntheticWorld {
    pub fn truth_json(&self) -> String {
        serde_json::to_string_pretty(&self.truth).expect("tags serialise")
    }
}

const SOCIAL_CHANNELS: [(EventType, f64); 7] = [
    (EventType::Call, 0.20),
    (EventType::Sms, 0.25),
    (EventType::OsnComment, 0.10),
    (EventType::OsnReaction, 0.15),
    (EventType::OsnMention, 0.05),
    (EventType::Bt, 0.15),
    (EventType::Wfd, 0.10),
];

const HOME_CLASSES: [DeviceClass; 4] = [
    DeviceClass::AccessPoint,
    DeviceClass::SmartTv,
    DeviceClass::HomeAssistant,
    DeviceClass::SmartBulb,
];

pub fn generate_world(spec: &SyntheticWorldSpec) -> Result<SyntheticWorld> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut events = Vec::new();
    let mut truth = TruthTags::new();
    let horizon = spec.duration_days as Millis * DAY;

    for e in 0..spec.n_egos {
        let ego = format!("u{e}");
        let people = (0..spec.n_strong_alters)
            .map(|i| (format!("{ego}-s{i}"), spec.rate_strong, TruthTag::Strong))
            .chain((0..spec.n_weak_alters).map(|i| (format!("{ego}-w{i}"), spec.rate_weak, TruthTag::Weak)));
        for (key, rate, tag) in people {
            truth.insert(key.clone(), tag);
            let multiplier = if spec.rate_dispersion > 0.0 {
                LogNormal::new(0.0, spec.rate_dispersion).unwrap().sample(&mut rng)
            } else {
                1.0
            };
            let gap = Exp::new(rate * multiplier / DAY as f64).unwrap();
            let mut t = gap.sample(&mut rng);
            while (t as Millis) < horizon {
                events.push(social_event(&mut rng, &ego, EPOCH_START + t as Millis, &key));
                t += gap.sample(&mut rng);
            }
        }

        for i in 0..spec.n_home_devices {
            truth.insert(format!("{ego}-h{i}"), TruthTag::Strong);
        }
        for i in 0..spec.n_transient_devices {
            truth.insert(format!("{ego}-t{i}"), TruthTag::Weak);
        }
        if spec.scan_interval_min > 0 && spec.duration_days > 0 {
            scans(&mut rng, spec, &ego, horizon, &mut events);
        }
        if spec.gps_interval_min > 0 && spec.duration_days > 0 {
            fixes(&mut rng, spec, &ego, horizon, &mut events)?;
        }
    }
    events.sort_by_key(|e| e.ts);
    Ok(SyntheticWorld { events, truth })
}

fn social_event(rng: &mut ChaCha8Rng, ego: &str, ts: Millis, key: &str) -> EventEnvelope {
    let mut u: f64 = rng.random();
    let mut kind = EventType::Call;
    for (k, p) in SOCIAL_CHANNELS {
        kind = k;
        if u < p {
            break;
        }
        u -= p;
    }
    if kind.is_sighting() {
        let rssi = rng.random_range(-75..=-40);
        let class = if rng.random_bool(0.8) {
            DeviceClass::PersonalMobile
        } else {
            DeviceClass::Wearable
        };
        EventEnvelope::sighting(ego, ts, kind, key, rssi, class)
    } else {
        EventEnvelope::interaction(ego, ts, kind, key)
    }
}

/// Where the ego is at minute-of-day `m`: home at night, work 9–17 on weekdays.
fn at_work(day: Millis, minute_of_day: Millis) -> bool {
    let weekday = day % 7 < 5;
    weekday && (9 * 60..17 * 60).contains(&minute_of_day)
}

fn scans(rng: &mut ChaCha8Rng, spec: &SyntheticWorldSpec, ego: &str, horizon: Millis, out: &mut Vec<EventEnvelope>) {
    let step = spec.scan_interval_min as Millis * MINUTE;
    let mut t = 0;
    while t < horizon {
        let (day, mod_) = (t / DAY, (t % DAY) / MINUTE);
        let ts = EPOCH_START + t;
        if !at_work(day, mod_) {
            for i in 0..spec.n_home_devices {
                if rng.random_bool(0.9) {
                    let class = HOME_CLASSES[i % HOME_CLASSES.len()];
                    let kind = if i % 2 == 0 { EventType::Wfd } else { EventType::Bt };
                    out.push(EventEnvelope::sighting(
                        ego,
                        ts,
                        kind,
                        &format!("{ego}-h{i}"),
                        rng.random_range(-80..=-40),
                        class,
                    ));
                }
            }
        }
        if spec.n_transient_devices > 0 && rng.random_bool(0.3) {
            let i = rng.random_range(0..spec.n_transient_devices);
            out.push(EventEnvelope::sighting(
                ego,
                ts,
                EventType::Bt,
                &format!("{ego}-t{i}"),
                rng.random_range(-90..=-50),
                DeviceClass::Printer,
            ));
        }
        t += step;
    }
}

fn fixes(
    rng: &mut ChaCha8Rng,
    spec: &SyntheticWorldSpec,
    ego: &str,
    horizon: Millis,
    out: &mut Vec<EventEnvelope>,
) -> Result<()> {
    let step = spec.gps_interval_min as Millis * MINUTE;
    let jitter = Normal::new(0.0, spec.gps_jitter_m.max(f64::MIN_POSITIVE)).unwrap();
    let mut outing: Option<(Millis, (f64, f64))> = None;
    let mut t = 0;
    while t < horizon {
        let (day, mod_) = (t / DAY, (t % DAY) / MINUTE);
        // one evening outing (19–21h) to a random venue on roughly a third of days
        if mod_ < step / MINUTE {
            outing = rng.random_bool(0.35).then(|| {
                let (dn, de) = (rng.random_range(-8000.0..8000.0), rng.random_range(-8000.0..8000.0));
                (day, offset(spec.home, dn, de))
            });
        }
        let anchor = match outing {
            Some((d, venue)) if d == day && (19 * 60..21 * 60).contains(&mod_) => venue,
            _ if at_work(day, mod_) => spec.work,
            _ => spec.home,
        };
        let (lat, lon) = offset(anchor, jitter.sample(rng), jitter.sample(rng));
        out.push(EventEnvelope::gps(
            ego,
            EPOCH_START + t,
            lat.clamp(-90.0, 90.0),
            lon.clamp(-180.0, 180.0),
        ));
        t += step;
    }
    Ok(())
}

/// Moves `(lat, lon)` by `north`/`east` meters.
pub fn offset(p: (f64, f64), north: f64, east: f64) -> (f64, f64) {
    let lat = p.0 + north / METERS_PER_DEG_LAT;
    let lon = p.1 + east / (METERS_PER_DEG_LAT * p.0.to_radians().cos());
    (lat, lon)
}

/// Per-ego weight lists with a planted number of modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayeredPopulationSpec {
    pub n_egos: usize,
    /// Expected alters per mode, strongest mode first; each ego scales every
    /// size by a uniform factor in 0.7..1.3.
    pub mode_sizes: Vec<f64>,
    /// Weakest mode centre, drawn per ego from this range.
    pub base: (f64, f64),
    /// Ratio between consecutive mode centres, drawn per ego.
    pub ratio: (f64, f64),
    /// Log-normal sigma of the multiplicative jitter around a mode centre.
    pub within_mode_sigma: f64,
    pub seed: u64,
}

impl Default for LayeredPopulationSpec {
    fn default() -> Self {
        LayeredPopulationSpec {
            n_egos: 100,
            mode_sizes: vec![5.0, 10.0, 35.0, 100.0],
            base: (2.0, 5.0),
            ratio: (3.5, 4.5),
            within_mode_sigma: 0.02,
            seed: 1,
        }
    }
}

/// Weight lists whose modes are log-spaced (consecutive centres differ by a
/// constant factor), with Dunbar-like mode populations by default.
pub fn layered_weight_population(spec: &LayeredPopulationSpec) -> Result<Vec<Vec<f64>>> {
    let ok_range = |r: (f64, f64)| r.0 > 0.0 && r.0 < r.1;
    if !(ok_range(spec.base) && ok_range(spec.ratio) && spec.ratio.0 > 1.0)
        || spec.mode_sizes.iter().any(|&s| s.is_nan() || s <= 0.0)
    {
        return Err(Error::validation(
            "population ranges must be positive and increasing, ratio above 1",
        ));
    }
    let spread = LogNormal::new(0.0, spec.within_mode_sigma)
        .map_err(|_| Error::validation("within-mode sigma must be non-negative"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let modes = spec.mode_sizes.len() as i32;
    Ok((0..spec.n_egos)
        .map(|_| {
            let base = rng.random_range(spec.base.0..spec.base.1);
            let ratio = rng.random_range(spec.ratio.0..spec.ratio.1);
            let mut weights = Vec::new();
            for (mode, &size) in spec.mode_sizes.iter().enumerate() {
                let center = base * ratio.powi(modes - 1 - mode as i32);
                let n = (size * rng.random_range(0.7..1.3)).round().max(1.0) as usize;
                weights.extend((0..n).map(|_| center * spread.sample(&mut rng)));
            }
            weights
        })
        .collect())
}
