//! Familiar places: ego networks of nearby devices and of GPS clusters.

pub mod geo;
pub mod proximity;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alter::{AlterId, Millis};
use crate::layers::EgoNetwork;
use crate::social::layer_distribution;

pub use geo::{geo_assign, haversine_m, GeoCluster, GeoClusterer, GpsFix, GpsModel};
pub use proximity::{proximity_weight_update, ContactRecord, LocationWeightState, ProximityEvent, ProximityModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceFeatureVectors {
    /// Distribution of in-proximity devices across proximity layers.
    pub fpp: Vec<f64>,
    /// One-hot layer of the current GPS cluster; all zero when there is none.
    pub fpg: Vec<f64>,
    pub window_end: Millis,
}

/// Out-of-network devices and clusters count in the outermost layer.
pub fn place_feature_vectors(
    prox_network: &EgoNetwork,
    gps_network: &EgoNetwork,
    in_proximity: &BTreeSet<AlterId>,
    current_cluster: Option<&AlterId>,
    window_end: Millis,
) -> PlaceFeatureVectors {
    let lg = gps_network.num_layers();
    let mut fpg = vec![0.0; lg];
    if let Some(id) = current_cluster {
        fpg[gps_network.layer_of(id).unwrap_or(lg) - 1] = 1.0;
    }
    PlaceFeatureVectors {
        fpp: layer_distribution(prox_network, in_proximity.iter()),
        fpg,
        window_end,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(k: &str) -> AlterId {
        AlterId::device(k).unwrap()
    }

    #[test]
    fn proximity_distribution_and_one_hot() {
        // six clearly separated weight levels
        let mut top = Vec::new();
        let levels: [[f64; 2]; 6] = [
            [1e6, 1e6 - 1.0],
            [1e5, 0.0],
            [1e4, 0.0],
            [1e3, 0.0],
            [1e2, 0.0],
            [10.0, 9.0],
        ];
        for (i, lv) in levels.iter().enumerate() {
            top.push((d(&format!("l{i}a")), lv[0]));
            if lv[1] > 0.0 {
                top.push((d(&format!("l{i}b")), lv[1]));
            }
        }
        top.sort_by(|a, b| b.1.total_cmp(&a.1));
        let prox = EgoNetwork::build(top, 500, 6);
        assert_eq!(prox.layer_sizes(), [2, 1, 1, 1, 1, 2]);

        let g = |k: &str| AlterId::geo_cluster(k).unwrap();
        let gps = EgoNetwork::build(vec![(g("g0"), 5000.0), (g("g1"), 50.0), (g("g2"), 1.0)], 15, 3);

        let near: BTreeSet<_> = [d("l0a"), d("l0b"), d("l5a"), d("l5b")].into();
        let f = place_feature_vectors(&prox, &gps, &near, Some(&g("g0")), 0);
        assert_eq!(f.fpp, [0.5, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert_eq!(f.fpg, [1.0, 0.0, 0.0]);

        let none = place_feature_vectors(&prox, &gps, &BTreeSet::new(), None, 0);
        assert_eq!(none.fpg, [0.0; 3]);
        assert_eq!(none.fpp, [0.0; 6]);

        let unknown = place_feature_vectors(&prox, &gps, &[d("new")].into(), Some(&g("g9")), 0);
        assert_eq!(unknown.fpp[5], 1.0);
        assert_eq!(unknown.fpg, [0.0, 0.0, 1.0]);
    }
}
