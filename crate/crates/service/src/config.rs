use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Service configuration, read from a TOML file. Relative paths are resolved
/// against the directory holding the file.
///
/// ```toml
/// port = 8080
/// data_path = "events.jsonl"
/// items_path = "items.csv"
/// probe_rate = 0.1
/// shared_pool_size = 104
/// rater_count = 1
/// seed = 7
/// annotators = ["A", "B", "C", "D", "E"]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    #[serde(default = "default_port")]
    pub port: u16,
    /// Append-only event log.
    pub data_path: PathBuf,
    /// Items to annotate (`item_id,source_id,run_id,source_text,simplified_text`).
    pub items_path: PathBuf,
    /// Probes per original item in each annotator's queue, rounded to the
    /// nearest whole number.
    #[serde(default)]
    pub probe_rate: f64,
    /// The first `shared_pool_size` items go to every annotator.
    #[serde(default)]
    pub shared_pool_size: usize,
    /// Annotators per item outside the shared pool.
    #[serde(default = "default_rater_count")]
    pub rater_count: usize,
    #[serde(default)]
    pub seed: u64,
    pub annotators: Vec<String>,
}

fn default_port() -> u16 {
    8080
}

fn default_rater_count() -> usize {
    1
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ServiceConfig {
    pub fn load(path: &Path) -> Result<ServiceConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: ServiceConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if let Some(dir) = path.parent() {
            cfg.data_path = dir.join(&cfg.data_path);
            cfg.items_path = dir.join(&cfg.items_path);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.probe_rate) {
            return Err(ConfigError::Invalid(format!(
                "probe_rate must be within [0, 1], got {}",
                self.probe_rate
            )));
        }
        if self.annotators.is_empty() {
            return Err(ConfigError::Invalid("no annotators configured".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for a in &self.annotators {
            if a.is_empty() || a.contains(|c: char| c.is_whitespace() || c == ',') {
                return Err(ConfigError::Invalid(format!("bad annotator id `{a}`")));
            }
            if !seen.insert(a) {
                return Err(ConfigError::Invalid(format!("duplicate annotator `{a}`")));
            }
        }
        if self.rater_count == 0 {
            return Err(ConfigError::Invalid("rater_count must be at least 1".into()));
        }
        Ok(())
    }
}
