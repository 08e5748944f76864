//! Semantic check of layers against ground-truth tie labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::structure::TruthTag;
use crate::error::{Error, Result};
use crate::layers::EgoNetwork;

/// Ground truth keyed by alter key.
pub type TruthTags = BTreeMap<String, TruthTag>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSemantics {
    pub strong: usize,
    pub weak: usize,
}

impl LayerSemantics {
    pub fn total(&self) -> usize {
        self.strong + self.weak
    }

    pub fn strong_fraction(&self) -> Option<f64> {
        (self.total() > 0).then(|| self.strong as f64 / self.total() as f64)
    }

    pub fn weak_fraction(&self) -> Option<f64> {
        self.strong_fraction().map(|f| 1.0 - f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoSemantics {
    pub ego: String,
    pub layers: Vec<LayerSemantics>,
    /// Strong fraction is non-increasing from the innermost populated layer outwards.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticReport {
    pub per_ego: Vec<EgoSemantics>,
    /// Average of the per-ego Strong fractions, over egos with that layer populated.
    pub mean_strong_fraction: Vec<Option<f64>>,
    pub monotone_egos: usize,
}

pub fn ego_semantics(ego: &str, network: &EgoNetwork, tags: &TruthTags) -> Result<EgoSemantics> {
    let mut untagged = Vec::new();
    let mut layers = Vec::with_capacity(network.num_layers());
    for layer in network.layers() {
        let mut sem = LayerSemantics { strong: 0, weak: 0 };
        for (id, _) in layer {
            match tags.get(id.key()) {
                Some(TruthTag::Strong) => sem.strong += 1,
                Some(TruthTag::Weak) => sem.weak += 1,
                None => untagged.push(id.key().to_string()),
            }
        }
        layers.push(sem);
    }
    if !untagged.is_empty() {
        return Err(Error::Untagged(untagged));
    }
    let fractions: Vec<f64> = layers.iter().filter_map(LayerSemantics::strong_fraction).collect();
    let monotone = fractions.windows(2).all(|f| f[0] >= f[1]);
    Ok(EgoSemantics {
        ego: ego.to_string(),
        layers,
        monotone,
    })
}

/// Per-layer Strong/Weak composition. Fails, naming the alters, when any
/// in-network alter has no tag.
pub fn semantic_layer_eval(egos: &[(&str, &EgoNetwork)], tags: &TruthTags) -> Result<SemanticReport> {
    let mut per_ego = Vec::with_capacity(egos.len());
    let mut untagged = Vec::new();
    for (ego, net) in egos {
        match ego_semantics(ego, net, tags) {
            Ok(s) => per_ego.push(s),
            Err(Error::Untagged(keys)) => untagged.extend(keys),
            Err(e) => return Err(e),
        }
    }
    if !untagged.is_empty() {
        return Err(Error::Untagged(untagged));
    }
    let l = per_ego.iter().map(|e| e.layers.len()).max().unwrap_or(0);
    let mean_strong_fraction = (0..l)
        .map(|i| {
            let fr: Vec<f64> = per_ego
                .iter()
                .filter_map(|e| e.layers.get(i)?.strong_fraction())
                .collect();
            (!fr.is_empty()).then(|| fr.iter().sum::<f64>() / fr.len() as f64)
        })
        .collect();
    let monotone_egos = per_ego.iter().filter(|e| e.monotone).count();
    Ok(SemanticReport {
        per_ego,
        mean_strong_fraction,
        monotone_egos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alter::AlterId;

    fn setup(tagged: &[(&str, f64, Option<TruthTag>)], l: usize) -> (EgoNetwork, TruthTags) {
        let top = tagged
            .iter()
            .map(|(k, w, _)| (AlterId::person(k).unwrap(), *w))
            .collect();
        let tags = tagged
            .iter()
            .filter_map(|(k, _, t)| Some((k.to_string(), (*t)?)))
            .collect();
        (EgoNetwork::build(top, 150, l), tags)
    }

    #[test]
    fn separable_case() {
        use TruthTag::*;
        let (n, tags) = setup(
            &[
                ("a", 100.0, Some(Strong)),
                ("b", 99.0, Some(Strong)),
                ("c", 1.0, Some(Weak)),
            ],
            2,
        );
        let r = semantic_layer_eval(&[("e", &n)], &tags).unwrap();
        assert_eq!(r.mean_strong_fraction, [Some(1.0), Some(0.0)]);
        assert_eq!(r.per_ego[0].layers[1].weak_fraction(), Some(1.0));
        assert_eq!(r.monotone_egos, 1);
    }

    #[test]
    fn untagged_alter_is_named() {
        let (n, tags) = setup(&[("a", 100.0, Some(TruthTag::Strong)), ("ghost", 1.0, None)], 2);
        match semantic_layer_eval(&[("e", &n)], &tags) {
            Err(Error::Untagged(keys)) => assert_eq!(keys, ["ghost"]),
            other => panic!("{other:?}"),
        }
    }
}
