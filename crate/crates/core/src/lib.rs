//! Streaming ego networks over heterogeneous interaction events.
//!
//! An ego's alters (people, nearby devices, visited places) are ranked by
//! interaction strength and the top of the ranking is clustered into
//! concentric layers. Every time window the engine reports how the currently
//! active alters are distributed over those layers:
//!
//! * [`social`]: people reached by calls, SMS, online social networks and
//!   face-to-face radio sightings;
//! * [`places`]: smart objects in proximity and online GPS clusters;
//! * [`engine`]: the incremental update that re-clusters only when the top
//!   of the ranking changes;
//! * [`analysis`]: offline structure and semantic reports over the networks;
//! * [`ingest`]: the JSONL event schema, replay pipeline and synthetic
//!   workloads.

pub mod alter;
pub mod analysis;
pub mod bench;
pub mod commands;
pub mod config;
pub mod engine;
pub mod error;
pub mod ingest;
pub mod layers;
pub mod places;
pub mod ranking;
pub mod snapshot;
pub mod social;

pub use alter::{AlterId, AlterKind, AlterRecord, DeviceClass, Millis};
pub use config::RunConfig;
pub use engine::{update_ego_network, EgoState, EngineConfig};
pub use error::{Error, Result};
pub use layers::{build_layers, layer_sizes, EgoNetwork};
pub use ranking::{apply_weights, top_eta_changed, ActiveWeight, AlterRanking};
