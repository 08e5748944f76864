//! Event ingestion: schema, identity unification, replay and synthetic data.

pub mod envelope;
pub mod identity;
pub mod replay;
pub mod synth;

pub use envelope::{parse_event, read_events, serialize_event, write_events, EventEnvelope, EventType, Observation};
pub use identity::IdentityMap;
pub use replay::{replay, sort_rows, ContextEngine, EgoReplay, FeatureRow, ReplayOutput, ReplayStats, Replayer};
pub use synth::{
    generate_benchmark, generate_world, layered_weight_population, LayeredPopulationSpec, SyntheticWorld,
    SyntheticWorldSpec,
};
