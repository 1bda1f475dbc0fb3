//! Optional TOML settings file. Every key mirrors a command-line flag; flags win.

use std::path::{Path, PathBuf};

use formanet_core::features::ValenceMode;
use formanet_core::ingest::{Format, TargetRule};
use formanet_core::ClosenessVariant;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    // ingest
    pub format: Option<Format>,
    pub target_cues: Option<Vec<String>>,
    pub target_rule: Option<TargetRule>,
    // analyze
    pub focus: Option<Vec<String>>,
    pub closeness: Option<ClosenessVariant>,
    pub valence_mode: Option<ValenceMode>,
    pub correlation_alpha: Option<f64>,
    pub candidate_sets: Option<Vec<Vec<String>>>,
    pub item_map: Option<PathBuf>,
    // frames
    pub frame_targets: Option<Vec<String>>,
    pub valence_alpha: Option<f64>,
    // simulate
    pub seed: Option<u64>,
    pub model: Option<String>,
    pub endpoint: Option<String>,
    pub n: Option<usize>,
    pub cues: Option<String>,
    pub concurrency: Option<usize>,
    pub retries: Option<u32>,
    pub temperature: Option<f64>,
    pub api_key_env: Option<String>,
    pub independent_calls: Option<bool>,
    pub backoff_ms: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read config `{}`: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| validation(format!("config `{}`: {e}", path.display())))
    }
}

/// Flag, else file value, else default.
pub fn pick<T>(flag: Option<T>, file: &Option<T>, default: T) -> T
where
    T: Clone,
{
    flag.or_else(|| file.clone()).unwrap_or(default)
}

pub fn check_alpha(name: &str, alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(validation(format!("{name} must lie in (0, 1), got {alpha}")))
    }
}
