//! Run configuration: a band description plus optional run parameters.
//! Command-line flags override the file; the effective configuration is
//! echoed in every report and parses back to itself.

use std::path::{Path, PathBuf};

use bandwidth_core::config::{BandConfig, ExtrinsicConfig, WarpConfig};
use bandwidth_core::{ExtrinsicSpec, WarpedBand};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeKind {
    Cmc,
    SupTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub interval: [f64; 2],
    pub warp: WarpConfig,
    #[serde(default)]
    pub k: ExtrinsicConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// `tr k` in CMC mode, its upper bound in sup-trace mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateau: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<usize>,
    /// Leaf position for the stability operator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_sign: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn band_config(&self) -> BandConfig {
        BandConfig { n: self.n, interval: self.interval, warp: self.warp.clone(), k: self.k.clone() }
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configs serialize")
    }
}

/// A parsed configuration file and the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub base: Option<PathBuf>,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = RunConfig::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        Ok(Self { config, base: path.parent().map(Path::to_path_buf) })
    }

    pub fn build(&self) -> Result<(WarpedBand<f64>, ExtrinsicSpec<f64>), CliError> {
        Ok(self.config.band_config().build(self.base.as_deref())?)
    }
}
