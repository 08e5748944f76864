//! Contact-window weights for devices seen in proximity.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alter::{AlterId, AlterKind, DeviceClass, Millis};
use crate::engine::{EgoState, EngineConfig};
use crate::error::{Error, Result};
use crate::layers::EgoNetwork;
use crate::ranking::ActiveWeight;

/// Five minutes.
pub const DEFAULT_DELTA_MAX_MS: Millis = 5 * 60 * 1000;

/// The only state kept per place alter: weight, contact count, last sighting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactRecord {
    pub weight: f64,
    pub n_contacts: u64,
    pub last_seen: Millis,
}

/// One sighting applied to a contact record.
///
/// The first sighting starts at weight 1 with one contact. A sighting within
/// `delta_max` of the previous one extends the current contact window and
/// adds `(n + 1) · Δ` with `Δ` in seconds; a later sighting opens a new
/// contact (`n += 1`) and adds the new `n`.
pub fn proximity_weight_update(prev: Option<&ContactRecord>, t: Millis, delta_max: Millis) -> Result<ContactRecord> {
    let Some(prev) = prev else {
        return Ok(ContactRecord {
            weight: 1.0,
            n_contacts: 1,
            last_seen: t,
        });
    };
    if t < prev.last_seen {
        return Err(Error::OutOfOrder {
            subject: "sighting".into(),
            ts: t,
            last: prev.last_seen,
        });
    }
    let gap = t - prev.last_seen;
    let mut next = *prev;
    if gap <= delta_max {
        next.weight += (prev.n_contacts + 1) as f64 * (gap as f64 / 1000.0);
    } else {
        next.n_contacts += 1;
        next.weight += next.n_contacts as f64;
    }
    next.last_seen = t;
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProximityEvent {
    pub timestamp: Millis,
    pub device: AlterId,
    pub device_class: DeviceClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationWeightState {
    delta_max: Millis,
    records: BTreeMap<AlterId, ContactRecord>,
}

impl LocationWeightState {
    pub fn new(delta_max: Millis) -> Result<Self> {
        if delta_max <= 0 {
            return Err(Error::validation("delta_max must be positive"));
        }
        Ok(LocationWeightState {
            delta_max,
            records: BTreeMap::new(),
        })
    }

    pub fn delta_max(&self) -> Millis {
        self.delta_max
    }

    pub fn get(&self, device: &AlterId) -> Option<&ContactRecord> {
        self.records.get(device)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn update(&mut self, device: &AlterId, t: Millis) -> Result<ContactRecord> {
        let next = proximity_weight_update(self.records.get(device), t, self.delta_max).map_err(|e| match e {
            Error::OutOfOrder { ts, last, .. } => Error::OutOfOrder {
                subject: device.to_string(),
                ts,
                last,
            },
            e => e,
        })?;
        self.records.insert(device.clone(), next);
        Ok(next)
    }

    pub(crate) fn active_weights<'a>(&self, ids: impl IntoIterator<Item = &'a AlterId>) -> Vec<ActiveWeight> {
        ids.into_iter()
            .filter_map(|id| {
                let r = self.records.get(id)?;
                Some(ActiveWeight::new(id.clone(), r.weight, r.n_contacts, r.last_seen))
            })
            .collect()
    }
}

/// Ego network of nearby smart objects and infrastructure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProximityModel {
    weights: LocationWeightState,
    ego: EgoState,
}

impl ProximityModel {
    pub fn new(delta_max: Millis, engine: EngineConfig) -> Result<Self> {
        Ok(ProximityModel {
            weights: LocationWeightState::new(delta_max)?,
            ego: EgoState::new(engine)?,
        })
    }

    pub fn weights(&self) -> &LocationWeightState {
        &self.weights
    }

    pub fn ego(&self) -> &EgoState {
        &self.ego
    }

    pub fn network(&self) -> Arc<EgoNetwork> {
        self.ego.network()
    }

    /// Applies one window of sightings in arrival order. Personal devices and
    /// unclassified ones are ignored here. Returns the devices in proximity
    /// and whether the network was rebuilt.
    pub fn process_window(&mut self, events: &[ProximityEvent]) -> Result<(BTreeSet<AlterId>, bool)> {
        let mut seen = BTreeSet::new();
        for e in events.iter().filter(|e| e.device_class.is_smart_object()) {
            if e.device.kind() != AlterKind::Device {
                return Err(Error::validation(format!(
                    "proximity alter {} is not a device",
                    e.device
                )));
            }
            self.weights.update(&e.device, e.timestamp)?;
            seen.insert(e.device.clone());
        }
        let updates = self.weights.active_weights(&seen);
        let (_, rebuilt) = self.ego.update(&updates)?;
        Ok((seen, rebuilt))
    }
}
