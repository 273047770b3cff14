//! Experiment configuration files (TOML, schema version 1).
//!
//! ```toml
//! version = 1
//!
//! [dataset]
//! path = "../data/MUTAG"        # relative paths resolve against the config file
//! name = "MUTAG"
//! attributes = "both"           # "degree" | "node-labels" | "both"
//!
//! [decomposition]
//! radii = [0, 1, 2, 3]
//!
//! [model]
//! widths = [[10], [5, 5], [5, 5, 1]]   # hidden units per level, S_0 .. S_2
//! alpha = 0.01                          # Leaky ReLU slope
//!
//! [training]
//! epochs = 100
//! lr = 0.001
//! beta1 = 0.9
//! beta2 = 0.999
//! epsilon = 1e-8
//!
//! [cv]
//! folds = 10
//! repeats = 10
//! seed = 0
//! compress = true
//!
//! [bench]
//! epochs = 3
//! timeout_secs = 600.0
//! memory_cap_mb = 4096
//! ```
//!
//! Every section except `dataset`, `decomposition` and `model` may be
//! omitted; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AttributeMode;
use crate::net::{AdamConfig, TrainConfig};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    pub path: PathBuf,
    pub name: String,
    #[serde(default)]
    pub attributes: AttributeMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSection {
    pub radii: Vec<usize>,
}

fn default_alpha() -> f64 {
    0.01
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub widths: Vec<Vec<usize>>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingSection {
    pub epochs: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let adam = AdamConfig::default();
        Self {
            epochs: 100,
            lr: adam.lr,
            beta1: adam.beta1,
            beta2: adam.beta2,
            epsilon: adam.epsilon,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CvSection {
    pub folds: usize,
    pub repeats: usize,
    pub seed: u64,
    pub compress: bool,
}

impl Default for CvSection {
    fn default() -> Self {
        Self {
            folds: 10,
            repeats: 10,
            seed: 0,
            compress: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchSection {
    pub epochs: usize,
    pub timeout_secs: f64,
    pub memory_cap_mb: u64,
}

impl Default for BenchSection {
    fn default() -> Self {
        Self {
            epochs: 3,
            timeout_secs: 600.0,
            memory_cap_mb: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub dataset: DatasetSection,
    pub decomposition: DecompositionSection,
    pub model: ModelSection,
    #[serde(default)]
    pub training: TrainingSection,
    #[serde(default)]
    pub cv: CvSection,
    #[serde(default)]
    pub bench: BenchSection,
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// Parses and validates TOML text. Relative dataset paths resolve
    /// against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let de = toml::Deserializer::new(text);
        let mut cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            invalid(&key, e.into_inner().message().trim().to_string())
        })?;
        if let Some(base) = base_dir {
            if cfg.dataset.path.is_relative() {
                cfg.dataset.path = base.join(&cfg.dataset.path);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(invalid(
                "version",
                format!("unsupported version {}, expected {CONFIG_VERSION}", self.version),
            ));
        }
        if self.dataset.name.is_empty() {
            return Err(invalid("dataset.name", "must not be empty"));
        }
        let radii = &self.decomposition.radii;
        if radii.is_empty() {
            return Err(invalid("decomposition.radii", "must list at least one radius"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("decomposition.radii", "must be strictly ascending"));
        }
        if self.model.widths.len() != 3 {
            return Err(invalid(
                "model.widths",
                format!(
                    "expected 3 levels (vertices, ego graphs, graphs), found {}",
                    self.model.widths.len()
                ),
            ));
        }
        if let Some(l) = self.model.widths.iter().position(|w| w.is_empty() || w.contains(&0)) {
            return Err(invalid(
                &format!("model.widths[{l}]"),
                "widths must be non-empty and positive",
            ));
        }
        if !(self.model.alpha.is_finite() && self.model.alpha >= 0.0) {
            return Err(invalid("model.alpha", "must be a finite non-negative number"));
        }
        let t = &self.training;
        if !(t.lr.is_finite() && t.lr >= 0.0) {
            return Err(invalid("training.lr", "must be finite and non-negative"));
        }
        for (key, b) in [("training.beta1", t.beta1), ("training.beta2", t.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(invalid(key, "must lie in [0, 1)"));
            }
        }
        if t.epsilon.is_nan() || t.epsilon <= 0.0 {
            return Err(invalid("training.epsilon", "must be positive"));
        }
        if self.cv.folds < 2 {
            return Err(invalid("cv.folds", "must be at least 2"));
        }
        if self.cv.repeats < 1 {
            return Err(invalid("cv.repeats", "must be at least 1"));
        }
        if self.bench.timeout_secs.is_nan() || self.bench.timeout_secs < 0.0 {
            return Err(invalid("bench.timeout_secs", "must be non-negative"));
        }
        Ok(())
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.training.epochs,
            adam: AdamConfig {
                lr: self.training.lr,
                beta1: self.training.beta1,
                beta2: self.training.beta2,
                epsilon: self.training.epsilon,
            },
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Reads, parses and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentConfig::from_toml_str(&text, path.parent())
}
