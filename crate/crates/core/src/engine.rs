//! Incremental ego-network maintenance.
//!
//! Each update merges the active alters' new weights into the ranking and
//! re-clusters only when the ordered top-`eta` `(alter, weight)` sequence
//! differs from the one the current network was built from. The result is
//! always identical to rebuilding from scratch after every update.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layers::EgoNetwork;
use crate::ranking::{pairs_differ, ActiveWeight, AlterRanking};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Maximum number of alters modelled by the layered network.
    pub eta: usize,
    pub num_layers: usize,
    /// Weight differences at or below this are ignored by the rebuild test.
    #[serde(default)]
    pub tie_epsilon: f64,
}

impl EngineConfig {
    pub fn new(eta: usize, num_layers: usize) -> Result<Self> {
        let cfg = EngineConfig {
            eta,
            num_layers,
            tie_epsilon: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_layers == 0 {
            return Err(Error::validation("num_layers must be at least 1"));
        }
        if self.eta < self.num_layers {
            return Err(Error::validation(format!(
                "eta ({}) must be >= num_layers ({})",
                self.eta, self.num_layers
            )));
        }
        if self.tie_epsilon.is_nan() || self.tie_epsilon < 0.0 {
            return Err(Error::validation("tie_epsilon must be non-negative"));
        }
        Ok(())
    }
}

/// Ranking plus current network for one ego. Single writer; the network is
/// handed out as a shared immutable snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoState {
    config: EngineConfig,
    ranking: AlterRanking,
    network: Arc<EgoNetwork>,
    #[serde(default)]
    rebuilds: u64,
}

impl EgoState {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        Ok(EgoState {
            config,
            ranking: AlterRanking::new(),
            network: Arc::new(EgoNetwork::empty(config.eta, config.num_layers)),
            rebuilds: 0,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn ranking(&self) -> &AlterRanking {
        &self.ranking
    }

    pub fn network(&self) -> Arc<EgoNetwork> {
        Arc::clone(&self.network)
    }

    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    /// Applies one batch of active-alter weights; returns the network after
    /// the update and whether it was re-clustered.
    pub fn update(&mut self, active: &[ActiveWeight]) -> Result<(Arc<EgoNetwork>, bool)> {
        self.update_inner(active, false)
    }

    /// Like [`update`](Self::update) but always re-clusters.
    pub fn update_forced(&mut self, active: &[ActiveWeight]) -> Result<(Arc<EgoNetwork>, bool)> {
        self.update_inner(active, true)
    }

    fn update_inner(&mut self, active: &[ActiveWeight], force: bool) -> Result<(Arc<EgoNetwork>, bool)> {
        self.ranking.apply(active)?;
        let eta = self.config.eta;
        let changed = force
            || pairs_differ(
                self.network.built_from().iter().map(|(id, w)| (id, *w)),
                self.ranking.top(eta).map(|r| (&r.id, r.weight)),
                self.config.tie_epsilon,
            );
        if changed {
            self.network = Arc::new(self.rebuild());
            self.rebuilds += 1;
        }
        Ok((self.network(), changed))
    }

    /// Checks that the stored network is the one the ranking implies.
    pub fn check(&self) -> Result<()> {
        self.config.validate()?;
        if self.network.eta() != self.config.eta || self.network.num_layers() != self.config.num_layers {
            return Err(Error::validation("network shape does not match engine config"));
        }
        if *self.network != self.rebuild() {
            return Err(Error::validation("network is stale with respect to the ranking"));
        }
        Ok(())
    }

    /// The network a from-scratch recompute over the current ranking yields.
    pub fn rebuild(&self) -> EgoNetwork {
        EgoNetwork::build(
            self.ranking.top_pairs(self.config.eta),
            self.config.eta,
            self.config.num_layers,
        )
    }
}

/// Functional entry point mirroring [`EgoState::update`].
pub fn update_ego_network(state: &mut EgoState, active: &[ActiveWeight]) -> Result<(Arc<EgoNetwork>, bool)> {
    state.update(active)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alter::AlterId;

    fn aw(k: &str, w: f64, t: i64) -> ActiveWeight {
        ActiveWeight::new(AlterId::person(k).unwrap(), w, 1, t)
    }

    #[test]
    fn config_validation() {
        assert!(EngineConfig::new(3, 4).is_err());
        assert!(EngineConfig::new(3, 0).is_err());
        assert!(EngineConfig::new(150, 4).is_ok());
    }

    #[test]
    fn first_contact_builds_single_layer() {
        let mut s = EgoState::new(EngineConfig::new(150, 4).unwrap()).unwrap();
        let (net, rebuilt) = s.update(&[aw("a", 1.0, 0)]).unwrap();
        assert!(rebuilt);
        assert_eq!(net.layer_sizes(), [1, 0, 0, 0]);
    }

    #[test]
    fn update_below_cut_is_skipped() {
        let mut s = EgoState::new(EngineConfig::new(2, 2).unwrap()).unwrap();
        s.update(&[aw("a", 10.0, 0), aw("b", 8.0, 0), aw("c", 1.0, 0)]).unwrap();
        let before = s.network();
        let (after, rebuilt) = s.update(&[aw("c", 2.0, 1)]).unwrap();
        assert!(!rebuilt);
        assert_eq!(*before, *after);
        assert_eq!(*after, s.rebuild());
    }

    #[test]
    fn rank_151_entering_top_150_evicts_previous_150th() {
        let mut s = EgoState::new(EngineConfig::new(150, 4).unwrap()).unwrap();
        let batch: Vec<_> = (0..200)
            .map(|i| aw(&format!("p{i:03}"), 1000.0 - i as f64, 0))
            .collect();
        s.update(&batch).unwrap();
        let old_150th = AlterId::person("p149").unwrap();
        let riser = AlterId::person("p150").unwrap();
        assert!(s.network().layer_of(&old_150th).is_some());
        assert!(s.network().layer_of(&riser).is_none());

        let (net, rebuilt) = s.update(&[aw("p150", 900.5, 1)]).unwrap();
        assert!(rebuilt);
        assert!(net.layer_of(&riser).is_some());
        assert!(net.layer_of(&old_150th).is_none());
        assert_eq!(*net, s.rebuild());
        assert_eq!(s.ranking().len(), 200);
    }

    #[test]
    fn layer_of_follows_demotion() {
        let mut s = EgoState::new(EngineConfig::new(10, 2).unwrap()).unwrap();
        s.update(&[aw("a", 10.0, 0), aw("b", 9.0, 0), aw("c", 1.0, 0)]).unwrap();
        let b = AlterId::person("b").unwrap();
        assert_eq!(s.network().layer_of(&b), Some(1));
        s.update(&[aw("a", 50.0, 1), aw("c", 2.0, 1)]).unwrap();
        assert_eq!(s.network().layer_of(&b), Some(2));
    }
}
