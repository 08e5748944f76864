//! Windowed replay of an event stream through the per-ego models.
//!
//! Events of one ego are applied in file order and must have non-decreasing
//! timestamps. They are bucketed into tumbling windows aligned to multiples
//! of the window length; when a window closes the models run their four
//! steps (active alters, weights, conditional network update, features) and
//! one [`FeatureRow`] is emitted. Egos are independent and replayed in
//! parallel; output is ordered by ego name, then window.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alter::Millis;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::ingest::envelope::{EventEnvelope, Observation};
use crate::places::{place_feature_vectors, GpsModel, ProximityModel};
use crate::social::SocialContext;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub ego: String,
    pub window_end: Millis,
    pub sc: Vec<f64>,
    pub fpp: Vec<f64>,
    pub fpg: Vec<f64>,
    pub active_count: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayStats {
    pub events: u64,
    pub social_events: u64,
    pub social_filtered: u64,
    pub proximity_events: u64,
    pub gps_fixes: u64,
    pub windows: u64,
    pub social_rebuilds: u64,
    pub proximity_rebuilds: u64,
    pub gps_rebuilds: u64,
}

impl ReplayStats {
    fn merge(&mut self, o: &ReplayStats) {
        self.events += o.events;
        self.social_events += o.social_events;
        self.social_filtered += o.social_filtered;
        self.proximity_events += o.proximity_events;
        self.gps_fixes += o.gps_fixes;
        self.windows += o.windows;
        self.social_rebuilds += o.social_rebuilds;
        self.proximity_rebuilds += o.proximity_rebuilds;
        self.gps_rebuilds += o.gps_rebuilds;
    }
}

/// The three context models of one ego.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextEngine {
    pub social: SocialContext,
    pub proximity: ProximityModel,
    pub gps: GpsModel,
}

impl ContextEngine {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        Ok(ContextEngine {
            social: SocialContext::new(config.lambda, config.rssi_threshold, config.social.engine()?)?,
            proximity: ProximityModel::new(config.delta_max_ms(), config.proximity.engine()?)?,
            gps: GpsModel::new(config.radius_max_m, config.delta_max_ms(), config.gps.engine()?)?,
        })
    }

    /// Runs one closed window through all three models.
    pub fn process_window(
        &mut self,
        ego: &str,
        window: Vec<Observation>,
        window_end: Millis,
        stats: &mut ReplayStats,
    ) -> Result<FeatureRow> {
        let mut social = Vec::new();
        let mut proximity = Vec::new();
        let mut fixes = Vec::new();
        for obs in window {
            match obs {
                Observation::Social(e) => social.push(e),
                Observation::Proximity(e) => proximity.push(e),
                Observation::Gps(f) => fixes.push(f),
            }
        }
        stats.social_events += social.len() as u64;
        stats.proximity_events += proximity.len() as u64;
        stats.gps_fixes += fixes.len() as u64;

        let sw = self.social.process_window(social, window_end)?;
        let (in_proximity, prox_rebuilt): (BTreeSet<_>, bool) = self.proximity.process_window(&proximity)?;
        let (current, gps_rebuilt) = self.gps.process_window(&fixes)?;
        let places = place_feature_vectors(
            &self.proximity.network(),
            &self.gps.network(),
            &in_proximity,
            current.as_ref(),
            window_end,
        );

        stats.windows += 1;
        stats.social_filtered += sw.filtered_out as u64;
        stats.social_rebuilds += sw.rebuilt as u64;
        stats.proximity_rebuilds += prox_rebuilt as u64;
        stats.gps_rebuilds += gps_rebuilt as u64;
        Ok(FeatureRow {
            ego: ego.to_string(),
            window_end,
            sc: sw.features.sc,
            fpp: places.fpp,
            fpg: places.fpg,
            active_count: sw.features.active_count,
        })
    }
}

/// Streaming state of one ego: its models plus the window being filled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoReplay {
    engine: ContextEngine,
    last_ts: Option<Millis>,
    open_window_end: Option<Millis>,
    pending: Vec<Observation>,
    stats: ReplayStats,
}

impl EgoReplay {
    pub fn new(config: &RunConfig) -> Result<Self> {
        Ok(EgoReplay {
            engine: ContextEngine::new(config)?,
            last_ts: None,
            open_window_end: None,
            pending: Vec::new(),
            stats: ReplayStats::default(),
        })
    }

    pub fn engine(&self) -> &ContextEngine {
        &self.engine
    }

    pub fn stats(&self) -> &ReplayStats {
        &self.stats
    }

    /// Feeds one event; returns the row of the window it closed, if any.
    pub fn feed(&mut self, ego: &str, env: &EventEnvelope, window_ms: Millis) -> Result<Option<FeatureRow>> {
        if let Some(last) = self.last_ts {
            if env.ts < last {
                return Err(Error::OutOfOrder {
                    subject: format!("ego {ego}"),
                    ts: env.ts,
                    last,
                });
            }
        }
        let obs = env.observation()?;
        self.last_ts = Some(env.ts);
        self.stats.events += 1;

        let window_end = (env.ts.div_euclid(window_ms) + 1) * window_ms;
        let closed = match self.open_window_end {
            Some(open) if open != window_end => self.flush(ego)?,
            _ => None,
        };
        self.open_window_end = Some(window_end);
        self.pending.push(obs);
        Ok(closed)
    }

    /// Closes the open window, if any.
    pub fn flush(&mut self, ego: &str) -> Result<Option<FeatureRow>> {
        let Some(end) = self.open_window_end.take() else {
            return Ok(None);
        };
        let window = std::mem::take(&mut self.pending);
        let row = self.engine.process_window(ego, window, end, &mut self.stats)?;
        Ok(Some(row))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplayOutput {
    pub rows: Vec<FeatureRow>,
    pub stats: ReplayStats,
}

/// Replay state for any number of egos. Serialisable, so a stream can be
/// split across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replayer {
    config: RunConfig,
    egos: BTreeMap<String, EgoReplay>,
}

impl Replayer {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        Ok(Replayer {
            config,
            egos: BTreeMap::new(),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn egos(&self) -> impl Iterator<Item = (&str, &EgoReplay)> {
        self.egos.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn ego(&self, ego: &str) -> Option<&EgoReplay> {
        self.egos.get(ego)
    }

    pub fn stats(&self) -> ReplayStats {
        let mut s = ReplayStats::default();
        self.egos.values().for_each(|e| s.merge(&e.stats));
        s
    }

    /// Feeds a batch of events. Windows still open at the end stay open;
    /// call [`finish`](Self::finish) to close them. Errors carry the index of
    /// the offending event within `events`; with several failing egos the
    /// lowest index is reported.
    pub fn process(&mut self, events: &[EventEnvelope]) -> Result<Vec<FeatureRow>> {
        let mut by_ego: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, e) in events.iter().enumerate() {
            by_ego.entry(e.ego.as_str()).or_default().push(i);
        }
        for ego in by_ego.keys() {
            if !self.egos.contains_key(*ego) {
                self.egos.insert(ego.to_string(), EgoReplay::new(&self.config)?);
            }
        }
        let window_ms = self.config.window_ms();
        let mut work: Vec<(&String, &mut EgoReplay, &Vec<usize>)> = self
            .egos
            .iter_mut()
            .filter_map(|(name, st)| by_ego.get(name.as_str()).map(|idx| (name, st, idx)))
            .collect();

        let results: Vec<std::result::Result<Vec<FeatureRow>, (usize, Error)>> = work
            .par_iter_mut()
            .map(|(name, st, idx)| {
                let mut rows = Vec::new();
                for &i in idx.iter() {
                    match st.feed(name, &events[i], window_ms) {
                        Ok(Some(row)) => rows.push(row),
                        Ok(None) => {}
                        Err(e) => return Err((i, e)),
                    }
                }
                Ok(rows)
            })
            .collect();

        let mut rows = Vec::new();
        let mut first_err: Option<(usize, Error)> = None;
        for r in results {
            match r {
                Ok(mut r) => rows.append(&mut r),
                Err((i, e)) => {
                    if first_err.as_ref().is_none_or(|(j, _)| i < *j) {
                        first_err = Some((i, e));
                    }
                }
            }
        }
        match first_err {
            Some((index, e)) => Err(Error::Replay {
                index,
                source: Box::new(e),
            }),
            None => Ok(rows),
        }
    }

    /// Closes every open window.
    pub fn finish(&mut self) -> Result<Vec<FeatureRow>> {
        let mut rows = Vec::new();
        for (name, st) in self.egos.iter_mut() {
            rows.extend(st.flush(name)?);
        }
        Ok(rows)
    }
}

/// Replays a whole stream with a fresh state and returns every row, ordered
/// by ego then window.
pub fn replay(events: &[EventEnvelope], config: &RunConfig) -> Result<ReplayOutput> {
    let mut r = Replayer::new(config.clone())?;
    let mut rows = r.process(events)?;
    rows.extend(r.finish()?);
    sort_rows(&mut rows);
    Ok(ReplayOutput { rows, stats: r.stats() })
}

pub fn sort_rows(rows: &mut [FeatureRow]) {
    rows.sort_by(|a, b| a.ego.cmp(&b.ego).then(a.window_end.cmp(&b.window_end)));
}
