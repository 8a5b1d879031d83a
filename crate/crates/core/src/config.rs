//! JSON descriptions of a band and its second fundamental form:
//!
//! ```json
//! {"n": 3, "interval": [-0.9, 0.9], "warp": {"kind": "cosine"}, "k": {"mode": "umbilic", "lambda": 0.0}}
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{load_warp_table_file, CustomWarp, ExtrinsicSpec, Warp, WarpedBand};
use crate::profile::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogKind {
    Cosine,
    Sinh,
    Power,
}

impl CatalogKind {
    pub fn warp(self) -> Warp<f64> {
        match self {
            CatalogKind::Cosine => Warp::Cosine,
            CatalogKind::Sinh => Warp::Sinh,
            CatalogKind::Power => Warp::Power,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WarpConfig {
    Cosine {},
    Sinh {},
    Power {},
    Flat {},
    /// `base * (1 + amplitude sin(frequency t + phase))`.
    Modulated {
        base: CatalogKind,
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// CSV table `t, f, f', f''`; relative paths resolve against the config file.
    Table { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileConfig {
    Constant {
        value: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// `offset + amplitude cos(frequency t + phase)`.
    Cosine {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl ProfileConfig {
    pub fn build(&self) -> Profile<f64> {
        match self {
            ProfileConfig::Constant { value } => Profile::Constant(*value),
            ProfileConfig::Polynomial { coefficients } => Profile::Polynomial(coefficients.clone()),
            ProfileConfig::Cosine { amplitude, frequency, phase, offset } => Profile::Cosine {
                amplitude: *amplitude,
                frequency: *frequency,
                phase: *phase,
                offset: *offset,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum ExtrinsicConfig {
    Umbilic { lambda: f64 },
    Diagonal { a: ProfileConfig, b: ProfileConfig },
    Conformal { psi: ProfileConfig },
}

impl Default for ExtrinsicConfig {
    fn default() -> Self {
        ExtrinsicConfig::Umbilic { lambda: 0.0 }
    }
}

impl ExtrinsicConfig {
    pub fn build(&self) -> ExtrinsicSpec<f64> {
        match self {
            ExtrinsicConfig::Umbilic { lambda } => ExtrinsicSpec::umbilic(*lambda),
            ExtrinsicConfig::Diagonal { a, b } => ExtrinsicSpec::Diagonal { a: a.build(), b: b.build() },
            ExtrinsicConfig::Conformal { psi } => ExtrinsicSpec::conformal(psi.build()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandConfig {
    pub n: usize,
    pub interval: [f64; 2],
    pub warp: WarpConfig,
    #[serde(default)]
    pub k: ExtrinsicConfig,
}

impl BandConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds the band; `base` is the directory table paths are relative to.
    pub fn build_band(&self, base: Option<&Path>) -> Result<WarpedBand<f64>> {
        let [t0, t1] = self.interval;
        let warp = match &self.warp {
            WarpConfig::Cosine {} => Warp::Cosine,
            WarpConfig::Sinh {} => Warp::Sinh,
            WarpConfig::Power {} => Warp::Power,
            WarpConfig::Flat {} => Warp::Custom(CustomWarp::constant(1.0)),
            WarpConfig::Modulated { base: kind, amplitude, frequency, phase } => {
                Warp::Custom(CustomWarp::modulated(kind.warp(), self.n, *amplitude, *frequency, *phase))
            }
            WarpConfig::Table { path } => {
                let full = match base {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                let (warp, (lo, hi)) = load_warp_table_file(&full)?;
                if t0 < lo || t1 > hi {
                    return Err(Error::Config(format!(
                        "interval [{t0}, {t1}] is not covered by the table on [{lo}, {hi}]"
                    )));
                }
                Warp::Custom(warp)
            }
        };
        WarpedBand::new(self.n, t0, t1, warp)
    }

    pub fn build(&self, base: Option<&Path>) -> Result<(WarpedBand<f64>, ExtrinsicSpec<f64>)> {
        Ok((self.build_band(base)?, self.k.build()))
    }
}
