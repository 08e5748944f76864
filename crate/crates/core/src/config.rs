//! Run configuration, loadable from TOML (or JSON by file extension).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alter::Millis;
use crate::engine::EngineConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub eta: usize,
    pub layers: usize,
}

impl NetworkConfig {
    pub fn engine(&self) -> Result<EngineConfig> {
        EngineConfig::new(self.eta, self.layers)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Weight of online interactions against physical ones, in [0, 1].
    pub lambda: f64,
    /// Weakest sighting (dBm) counted as a face-to-face interaction.
    pub rssi_threshold: i32,
    /// Longest gap between sightings of one contact window, seconds.
    pub delta_max_secs: u64,
    /// Feature window length, seconds.
    pub window_secs: u64,
    pub radius_max_m: f64,
    pub social: NetworkConfig,
    pub proximity: NetworkConfig,
    pub gps: NetworkConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda: 0.5,
            rssi_threshold: -65,
            delta_max_secs: 300,
            window_secs: 60,
            radius_max_m: 100.0,
            social: NetworkConfig { eta: 150, layers: 4 },
            proximity: NetworkConfig { eta: 500, layers: 6 },
            gps: NetworkConfig { eta: 15, layers: 3 },
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::validation(format!(
                "lambda out of range: {} (expected 0..=1)",
                self.lambda
            )));
        }
        if self.delta_max_secs == 0 {
            return Err(Error::validation("delta_max_secs must be positive"));
        }
        if self.window_secs == 0 {
            return Err(Error::validation("window_secs must be positive"));
        }
        if !(self.radius_max_m > 0.0 && self.radius_max_m.is_finite()) {
            return Err(Error::validation("radius_max_m must be positive"));
        }
        for (name, net) in [
            ("social", self.social),
            ("proximity", self.proximity),
            ("gps", self.gps),
        ] {
            net.engine().map_err(|e| Error::validation(format!("{name}: {e}")))?;
        }
        Ok(())
    }

    pub fn delta_max_ms(&self) -> Millis {
        self.delta_max_secs as Millis * 1000
    }

    pub fn window_ms(&self) -> Millis {
        self.window_secs as Millis * 1000
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::validation(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::validation(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }
}
