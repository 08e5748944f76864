//! Social context: active-alter extraction, interaction-count weights and
//! the per-window distribution of active alters across social layers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alter::{AlterId, AlterKind, DeviceClass, Millis};
use crate::engine::{EgoState, EngineConfig};
use crate::error::{Error, Result};
use crate::layers::EgoNetwork;
use crate::ranking::ActiveWeight;

pub const DEFAULT_RSSI_THRESHOLD: i32 = -65;
pub const DEFAULT_LAMBDA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Call,
    Sms,
    OsnComment,
    OsnReaction,
    OsnMention,
    BtSighting,
    WfdSighting,
}

impl Channel {
    pub const ALL: [Channel; 7] = [
        Channel::Call,
        Channel::Sms,
        Channel::OsnComment,
        Channel::OsnReaction,
        Channel::OsnMention,
        Channel::BtSighting,
        Channel::WfdSighting,
    ];

    pub fn is_sighting(self) -> bool {
        matches!(self, Channel::BtSighting | Channel::WfdSighting)
    }

    /// Online social network activity; everything else is physical.
    pub fn is_virtual(self) -> bool {
        matches!(self, Channel::OsnComment | Channel::OsnReaction | Channel::OsnMention)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialEvent {
    pub timestamp: Millis,
    pub channel: Channel,
    pub counterpart: AlterId,
    pub rssi: Option<i32>,
    pub device_class: Option<DeviceClass>,
}

impl SocialEvent {
    pub fn interaction(timestamp: Millis, channel: Channel, counterpart: AlterId) -> Self {
        SocialEvent {
            timestamp,
            channel,
            counterpart,
            rssi: None,
            device_class: None,
        }
    }

    pub fn sighting(timestamp: Millis, channel: Channel, counterpart: AlterId, rssi: i32, class: DeviceClass) -> Self {
        SocialEvent {
            timestamp,
            channel,
            counterpart,
            rssi: Some(rssi),
            device_class: Some(class),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.counterpart.kind() != AlterKind::Person {
            return Err(Error::validation(format!(
                "social counterpart {} is not a person",
                self.counterpart
            )));
        }
        let has_radio = (self.rssi.is_some(), self.device_class.is_some());
        match (self.channel.is_sighting(), has_radio) {
            (true, (true, true)) | (false, (false, false)) => Ok(()),
            (true, _) => Err(Error::validation(format!(
                "{:?} event for {} requires rssi and device_class",
                self.channel, self.counterpart
            ))),
            (false, _) => Err(Error::validation(format!(
                "{:?} event for {} must not carry rssi or device_class",
                self.channel, self.counterpart
            ))),
        }
    }
}

/// Keeps sightings of nearby personal devices with a strong enough signal;
/// non-sighting events pass untouched.
pub fn filter_social_event(event: SocialEvent, rssi_threshold: i32) -> Result<Option<SocialEvent>> {
    event.validate()?;
    if !event.channel.is_sighting() {
        return Ok(Some(event));
    }
    let (rssi, class) = (event.rssi.unwrap(), event.device_class.unwrap());
    Ok((rssi >= rssi_threshold && class.is_personal()).then_some(event))
}

/// Distinct counterparts of (already filtered) events, in key order.
pub fn extract_active_alters<'a>(events: impl IntoIterator<Item = &'a SocialEvent>) -> BTreeSet<AlterId> {
    events.into_iter().map(|e| e.counterpart.clone()).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelCounts {
    counts: [u64; 7],
    last_seen: Millis,
}

impl ChannelCounts {
    pub fn get(&self, channel: Channel) -> u64 {
        self.counts[channel.index()]
    }

    /// Sum over online social network channels.
    pub fn virtual_weight(&self) -> f64 {
        Channel::ALL
            .iter()
            .filter(|c| c.is_virtual())
            .map(|&c| self.get(c) as f64)
            .sum()
    }

    /// Sum over calls, SMS and face-to-face sightings.
    pub fn physical_weight(&self) -> f64 {
        Channel::ALL
            .iter()
            .filter(|c| !c.is_virtual())
            .map(|&c| self.get(c) as f64)
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn last_seen(&self) -> Millis {
        self.last_seen
    }
}

/// Per-alter interaction counters and the virtual/physical mixing weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialWeightState {
    lambda: f64,
    counters: BTreeMap<AlterId, ChannelCounts>,
}

impl SocialWeightState {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::validation(format!("lambda out of range: {lambda}")));
        }
        Ok(SocialWeightState {
            lambda,
            counters: BTreeMap::new(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn counts(&self, alter: &AlterId) -> Option<&ChannelCounts> {
        self.counters.get(alter)
    }

    /// Counts one interaction.
    pub fn record(&mut self, event: &SocialEvent) {
        let c = self.counters.entry(event.counterpart.clone()).or_default();
        c.counts[event.channel.index()] += 1;
        c.last_seen = c.last_seen.max(event.timestamp);
    }

    /// Counts one window of filtered events. Repeated sightings of the same
    /// counterpart on the same radio within the window count once.
    pub fn record_window(&mut self, events: &[SocialEvent]) {
        let mut sighted: HashSet<(&AlterId, Channel)> = HashSet::new();
        for e in events {
            if e.channel.is_sighting() && !sighted.insert((&e.counterpart, e.channel)) {
                let c = self.counters.get_mut(&e.counterpart).expect("counted above");
                c.last_seen = c.last_seen.max(e.timestamp);
                continue;
            }
            self.record(e);
        }
    }

    /// `lambda · virtual + (1 − lambda) · physical`; zero for unknown alters.
    pub fn social_weight(&self, alter: &AlterId) -> f64 {
        self.counters.get(alter).map_or(0.0, |c| {
            self.lambda * c.virtual_weight() + (1.0 - self.lambda) * c.physical_weight()
        })
    }

    pub fn active_weights<'a>(&self, active: impl IntoIterator<Item = &'a AlterId>) -> Vec<ActiveWeight> {
        active
            .into_iter()
            .filter_map(|id| {
                let c = self.counters.get(id)?;
                Some(ActiveWeight::new(
                    id.clone(),
                    self.social_weight(id),
                    c.total(),
                    c.last_seen,
                ))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialFeatureVector {
    pub sc: Vec<f64>,
    pub window_end: Millis,
    pub active_count: usize,
}

/// Fraction of active alters in each layer. Active alters outside the
/// network are counted in the outermost layer.
pub fn social_feature_vector(
    network: &EgoNetwork,
    active: &BTreeSet<AlterId>,
    window_end: Millis,
) -> SocialFeatureVector {
    SocialFeatureVector {
        sc: layer_distribution(network, active.iter()),
        window_end,
        active_count: active.len(),
    }
}

pub(crate) fn layer_distribution<'a>(
    network: &EgoNetwork,
    ids: impl ExactSizeIterator<Item = &'a AlterId>,
) -> Vec<f64> {
    let l = network.num_layers();
    let mut counts = vec![0usize; l];
    let n = ids.len();
    for id in ids {
        let layer = network.layer_of(id).unwrap_or(l);
        counts[layer - 1] += 1;
    }
    if n == 0 {
        return vec![0.0; l];
    }
    counts.into_iter().map(|c| c as f64 / n as f64).collect()
}

/// Outcome of one social window.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialWindow {
    pub features: SocialFeatureVector,
    pub filtered_out: usize,
    pub rebuilt: bool,
}

/// Social weights and the social ego network of one ego.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialContext {
    rssi_threshold: i32,
    weights: SocialWeightState,
    ego: EgoState,
}

impl SocialContext {
    pub fn new(lambda: f64, rssi_threshold: i32, engine: EngineConfig) -> Result<Self> {
        Ok(SocialContext {
            rssi_threshold,
            weights: SocialWeightState::new(lambda)?,
            ego: EgoState::new(engine)?,
        })
    }

    pub fn weights(&self) -> &SocialWeightState {
        &self.weights
    }

    pub fn ego(&self) -> &EgoState {
        &self.ego
    }

    pub fn network(&self) -> Arc<EgoNetwork> {
        self.ego.network()
    }

    /// Filter, extract active alters, update weights and network, classify.
    pub fn process_window(&mut self, events: Vec<SocialEvent>, window_end: Millis) -> Result<SocialWindow> {
        let total = events.len();
        let mut kept = Vec::with_capacity(total);
        for e in events {
            if let Some(e) = filter_social_event(e, self.rssi_threshold)? {
                kept.push(e);
            }
        }
        let active = extract_active_alters(&kept);
        self.weights.record_window(&kept);
        let updates = self.weights.active_weights(&active);
        let (network, rebuilt) = self.ego.update(&updates)?;
        Ok(SocialWindow {
            features: social_feature_vector(&network, &active, window_end),
            filtered_out: total - kept.len(),
            rebuilt,
        })
    }
}
