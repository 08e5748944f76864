//! Offline analysis of accumulated ego networks.

pub mod meanshift;
pub mod semantics;
pub mod structure;

pub use meanshift::{estimate_bandwidth, mean_shift_modes, optimal_circles};
pub use semantics::{semantic_layer_eval, EgoSemantics, LayerSemantics, SemanticReport, TruthTags};
pub use structure::{structure_report, EgoInput, EgoLayerStats, StructureReport, TruthTag, WeightSample};
