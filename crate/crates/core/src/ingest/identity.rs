//! Collapses a person's several identifiers (phone number, OSN handle, MAC)
//! into one canonical alter key.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::envelope::EventEnvelope;

/// JSON object mapping identifier -> canonical key.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdentityMap(BTreeMap<String, String>);

impl IdentityMap {
    pub fn from_json(text: &str) -> Result<Self> {
        let map: IdentityMap =
            serde_json::from_str(text).map_err(|e| Error::validation(format!("identity map: {e}")))?;
        if map.0.values().any(String::is_empty) {
            return Err(Error::validation("identity map: empty canonical key"));
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn resolve<'a>(&'a self, id: &'a str) -> &'a str {
        self.0.get(id).map_or(id, String::as_str)
    }

    pub fn apply(&self, env: &mut EventEnvelope) {
        if let Some(cp) = env.counterpart.as_mut() {
            if let Some(canonical) = self.0.get(cp.as_str()) {
                *cp = canonical.clone();
            }
        }
    }
}
