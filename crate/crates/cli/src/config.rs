//! Optional JSON configuration file. Command-line flags take precedence over
//! its values.

use std::path::Path;

use anyhow::Context;
use lossnet_core::LengthDistribution;
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub pi: Option<LengthDistribution>,
    pub lambda: Option<f64>,
    pub capacity: Option<u32>,
    pub seed: Option<u64>,
    pub cap: Option<usize>,
    pub reps: Option<usize>,
    pub window: Option<(f64, f64)>,
    pub point: Option<f64>,
    pub grid: Option<String>,
    pub degree: Option<usize>,
    pub generations: Option<u32>,
    pub threads: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
    }
}

/// Bad or missing input; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Flag value, else config value, else a usage error naming the flag.
pub fn require<T>(flag: Option<T>, config: Option<T>, name: &str) -> anyhow::Result<T> {
    flag.or(config).ok_or_else(|| UsageError(format!("missing required option --{name}")).into())
}
