//! The JSON configuration file. Every field is optional; flags override it.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use entwit::qnn::{TrainingConfig, UpdateMode};
use entwit::IntegrationConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub angular_scale: Option<f64>,
    pub training: TrainingOverrides,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub entanglement_schedule: Option<String>,
    pub phase_schedule: Option<String>,
}

/// Training settings left unset fall back to the defaults for the target.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingOverrides {
    pub learning_rate: Option<f64>,
    pub max_epochs: Option<usize>,
    pub rms_stop: Option<f64>,
    pub mode: Option<UpdateMode>,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn integration(&self) -> Result<IntegrationConfig> {
        let d = IntegrationConfig::default();
        let cfg = IntegrationConfig::new(self.dt.unwrap_or(d.dt), self.t_final.unwrap_or(d.t_final))?
            .with_angular_scale(self.angular_scale.unwrap_or(d.angular_scale));
        cfg.validate()?;
        Ok(cfg)
    }
}

impl TrainingOverrides {
    /// Applies `other` on top of `self`.
    pub fn merge(self, other: TrainingOverrides) -> Self {
        Self {
            learning_rate: other.learning_rate.or(self.learning_rate),
            max_epochs: other.max_epochs.or(self.max_epochs),
            rms_stop: other.rms_stop.or(self.rms_stop),
            mode: other.mode.or(self.mode),
        }
    }

    pub fn resolve(self, default_learning_rate: f64) -> TrainingConfig {
        let d = TrainingConfig::default();
        TrainingConfig {
            learning_rate: self.learning_rate.unwrap_or(default_learning_rate),
            max_epochs: self.max_epochs.unwrap_or(d.max_epochs),
            rms_stop: self.rms_stop.unwrap_or(d.rms_stop),
            mode: self.mode.unwrap_or(d.mode),
            gradient: d.gradient,
        }
    }
}
