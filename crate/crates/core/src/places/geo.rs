//! Single-pass clustering of GPS fixes into place alters.
//!
//! Each fix is looked at once: it joins the nearest cluster whose centre is
//! within `radius_max` or starts a new one. A cluster keeps only its centre,
//! radius, fix count and contact record, never the fixes themselves.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alter::{AlterId, Millis};
use crate::engine::{EgoState, EngineConfig};
use crate::error::{Error, Result};
use crate::layers::EgoNetwork;
use crate::places::proximity::{proximity_weight_update, ContactRecord};
use crate::ranking::ActiveWeight;

pub const EARTH_RADIUS_M: f64 = 6_371_008.8;
pub const DEFAULT_RADIUS_MAX_M: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpsFix {
    pub timestamp: Millis,
    pub lat: f64,
    pub lon: f64,
}

impl GpsFix {
    pub fn new(timestamp: Millis, lat: f64, lon: f64) -> Result<Self> {
        let fix = GpsFix { timestamp, lat, lon };
        fix.validate()?;
        Ok(fix)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-90.0..=90.0).contains(&self.lat) {
            return Err(Error::validation(format!("lat out of bounds: {}", self.lat)));
        }
        if !(-180.0..=180.0).contains(&self.lon) {
            return Err(Error::validation(format!("lon out of bounds: {}", self.lon)));
        }
        Ok(())
    }
}

/// Great-circle distance in meters between two `(lat, lon)` points in degrees.
pub fn haversine_m(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat1, lat2) = (a.0.to_radians(), b.0.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.1 - a.1).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoCluster {
    pub id: AlterId,
    pub center: (f64, f64),
    pub radius_m: f64,
    pub n_fixes: u64,
    pub contact: ContactRecord,
}

impl GeoCluster {
    pub fn weight(&self) -> f64 {
        self.contact.weight
    }

    // running mean; longitude offsets are wrapped so clusters straddling the
    // antimeridian stay put
    fn absorb(&mut self, fix: &GpsFix) {
        self.n_fixes += 1;
        let n = self.n_fixes as f64;
        let mut dlon = fix.lon - self.center.1;
        if dlon > 180.0 {
            dlon -= 360.0;
        } else if dlon < -180.0 {
            dlon += 360.0;
        }
        let lat = self.center.0 + (fix.lat - self.center.0) / n;
        let mut lon = self.center.1 + dlon / n;
        if lon > 180.0 {
            lon -= 360.0;
        } else if lon < -180.0 {
            lon += 360.0;
        }
        self.center = (lat, lon);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoClusterer {
    radius_max_m: f64,
    delta_max: Millis,
    clusters: Vec<GeoCluster>,
}

impl GeoClusterer {
    pub fn new(radius_max_m: f64, delta_max: Millis) -> Result<Self> {
        if !(radius_max_m > 0.0 && radius_max_m.is_finite()) {
            return Err(Error::validation("radius_max must be positive"));
        }
        if delta_max <= 0 {
            return Err(Error::validation("delta_max must be positive"));
        }
        Ok(GeoClusterer {
            radius_max_m,
            delta_max,
            clusters: Vec::new(),
        })
    }

    pub fn clusters(&self) -> &[GeoCluster] {
        &self.clusters
    }

    pub fn get(&self, id: &AlterId) -> Option<&GeoCluster> {
        self.clusters.iter().find(|c| &c.id == id)
    }

    /// Number of raw fixes held in memory. Always zero.
    pub fn stored_fix_count(&self) -> usize {
        0
    }

    /// Assigns a fix; returns the cluster id and whether it was created.
    pub fn assign(&mut self, fix: &GpsFix) -> Result<(AlterId, bool)> {
        fix.validate()?;
        let here = (fix.lat, fix.lon);
        let nearest = self
            .clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i, haversine_m(c.center, here)))
            .filter(|&(_, d)| d <= self.radius_max_m)
            .min_by(|a, b| a.1.total_cmp(&b.1));

        match nearest {
            Some((i, _)) => {
                let delta_max = self.delta_max;
                let radius_max = self.radius_max_m;
                let c = &mut self.clusters[i];
                let contact =
                    proximity_weight_update(Some(&c.contact), fix.timestamp, delta_max).map_err(|e| match e {
                        Error::OutOfOrder { ts, last, .. } => Error::OutOfOrder {
                            subject: c.id.to_string(),
                            ts,
                            last,
                        },
                        e => e,
                    })?;
                c.contact = contact;
                c.absorb(fix);
                c.radius_m = c.radius_m.max(haversine_m(c.center, here)).min(radius_max);
                Ok((c.id.clone(), false))
            }
            None => {
                let id = AlterId::geo_cluster(format!("g{}", self.clusters.len()))?;
                let contact = proximity_weight_update(None, fix.timestamp, self.delta_max)?;
                self.clusters.push(GeoCluster {
                    id: id.clone(),
                    center: here,
                    radius_m: 0.0,
                    n_fixes: 1,
                    contact,
                });
                Ok((id, true))
            }
        }
    }

    pub(crate) fn active_weights<'a>(&self, ids: impl IntoIterator<Item = &'a AlterId>) -> Vec<ActiveWeight> {
        ids.into_iter()
            .filter_map(|id| {
                let c = self.get(id)?;
                Some(ActiveWeight::new(
                    id.clone(),
                    c.contact.weight,
                    c.contact.n_contacts,
                    c.contact.last_seen,
                ))
            })
            .collect()
    }
}

/// Free-function form of [`GeoClusterer::assign`].
pub fn geo_assign(clusters: &mut GeoClusterer, fix: &GpsFix) -> Result<(AlterId, bool)> {
    clusters.assign(fix)
}

/// Ego network of visited places.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpsModel {
    clusterer: GeoClusterer,
    ego: EgoState,
}

impl GpsModel {
    pub fn new(radius_max_m: f64, delta_max: Millis, engine: EngineConfig) -> Result<Self> {
        Ok(GpsModel {
            clusterer: GeoClusterer::new(radius_max_m, delta_max)?,
            ego: EgoState::new(engine)?,
        })
    }

    pub fn clusterer(&self) -> &GeoClusterer {
        &self.clusterer
    }

    pub fn ego(&self) -> &EgoState {
        &self.ego
    }

    pub fn network(&self) -> Arc<EgoNetwork> {
        self.ego.network()
    }

    /// Clusters one window of fixes. The current place is the cluster of the
    /// last fix in the window, if any.
    pub fn process_window(&mut self, fixes: &[GpsFix]) -> Result<(Option<AlterId>, bool)> {
        let mut touched = BTreeSet::new();
        let mut current = None;
        for fix in fixes {
            let (id, _) = self.clusterer.assign(fix)?;
            touched.insert(id.clone());
            current = Some(id);
        }
        let updates = self.clusterer.active_weights(&touched);
        let (_, rebuilt) = self.ego.update(&updates)?;
        Ok((current, rebuilt))
    }
}
