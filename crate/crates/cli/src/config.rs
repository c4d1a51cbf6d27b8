use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

pub const DEFAULT_OUT_DIR: &str = "out";

/// Optional TOML file whose keys mirror the command-line flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub f_grid: Option<Vec<f64>>,
    pub f_level: Option<f64>,
    pub min_leaf: Option<usize>,
    pub dependence_alpha: Option<f64>,
    pub small_set_threshold: Option<usize>,
    pub k_top: Option<usize>,
    pub measures: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())).into())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid config: {0}")]
pub struct ConfigError(pub String);

/// Settings shared by every subcommand after flags, environment and
/// config file are merged.
#[derive(Debug, Clone)]
pub struct Run {
    pub file: FileConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Run {
    /// Output directory: flag, then `MLCMETA_OUT_DIR` (both arrive through
    /// `flag_out_dir`), then the config file, then [`DEFAULT_OUT_DIR`].
    pub fn resolve(
        config: Option<&Path>,
        flag_out_dir: Option<PathBuf>,
        flag_seed: Option<u64>,
    ) -> anyhow::Result<Self> {
        let file = match config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let out_dir = flag_out_dir
            .or_else(|| file.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let seed = flag_seed.or(file.seed).unwrap_or(0);
        Ok(Run { file, out_dir, seed })
    }
}

/// Flag value, else config value, else default.
pub fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}
