//! Experiment configuration, read from a flat TOML file.
//!
//! ```toml
//! date_column = "Date"
//! truncate_length = 2500
//! split_fraction = 0.5
//! methods = ["naive", "drift", "ima11", "linreg", "mpanf"]
//! output_dir = "out"
//! seed = 20241013
//! exogenous = { name = "FTSE", path = "FTSE.csv", value_column = "Open" }
//! series = [
//!     { name = "AAPL", path = "AAPL.csv", value_column = "Close" },
//! ]
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::forecast::{DriftMode, FitOptions, Method};
use crate::montecarlo::{DEFAULT_SEED, DEFAULT_STEPS, DEFAULT_TRIALS};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub name: String,
    pub path: PathBuf,
    pub value_column: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub series: Vec<SeriesSpec>,
    pub exogenous: SeriesSpec,
    pub date_column: String,
    pub truncate_length: usize,
    pub split_fraction: f64,
    pub methods: Vec<Method>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub fit: FitOptions,
    pub mc_steps: usize,
    pub mc_trials: usize,
    pub mc_p_grid: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    series: Vec<SeriesSpec>,
    exogenous: SeriesSpec,
    #[serde(default = "default_date_column")]
    date_column: String,
    #[serde(default = "default_truncate")]
    truncate_length: usize,
    #[serde(default = "default_fraction")]
    split_fraction: f64,
    #[serde(default = "default_methods")]
    methods: Vec<String>,
    #[serde(default = "default_output_dir")]
    output_dir: PathBuf,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default)]
    drift: Option<String>,
    #[serde(default = "default_true")]
    linreg_intercept: bool,
    #[serde(default = "default_mc_steps")]
    mc_steps: usize,
    #[serde(default = "default_mc_trials")]
    mc_trials: usize,
    #[serde(default = "default_p_grid")]
    mc_p_grid: Vec<f64>,
}

fn default_date_column() -> String {
    "Date".into()
}
fn default_truncate() -> usize {
    2500
}
fn default_fraction() -> f64 {
    0.5
}
fn default_methods() -> Vec<String> {
    Method::ALL.iter().map(|m| m.id().to_string()).collect()
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_true() -> bool {
    true
}
fn default_mc_steps() -> usize {
    DEFAULT_STEPS
}
fn default_mc_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_p_grid() -> Vec<f64> {
    vec![0.5, 0.55, 0.6, 0.7, 0.8, 0.9]
}

/// Parses a comma-separated method list such as `naive,mpanf`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn parse_drift_mode(s: &str) -> Result<DriftMode> {
    match s.trim().to_ascii_lowercase().as_str() {
        "fixed" => Ok(DriftMode::Fixed),
        "rolling" => Ok(DriftMode::Rolling),
        other => Err(Error::InvalidConfig(format!("unknown drift mode `{other}`"))),
    }
}

impl ExperimentConfig {
    /// A config with the default protocol: 2,500 observations, 1:1 split,
    /// all five methods.
    pub fn new(series: Vec<SeriesSpec>, exogenous: SeriesSpec) -> Self {
        Self {
            series,
            exogenous,
            date_column: default_date_column(),
            truncate_length: default_truncate(),
            split_fraction: default_fraction(),
            methods: Method::ALL.to_vec(),
            output_dir: default_output_dir(),
            seed: DEFAULT_SEED,
            fit: FitOptions::default(),
            mc_steps: DEFAULT_STEPS,
            mc_trials: DEFAULT_TRIALS,
            mc_p_grid: default_p_grid(),
        }
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base_dir.join(p) };
        let resolve_spec = |s: SeriesSpec| SeriesSpec {
            path: resolve(s.path),
            ..s
        };
        let methods = raw
            .methods
            .iter()
            .map(|m| m.parse())
            .collect::<Result<Vec<Method>>>()?;
        let config = Self {
            series: raw.series.into_iter().map(resolve_spec).collect(),
            exogenous: resolve_spec(raw.exogenous),
            date_column: raw.date_column,
            truncate_length: raw.truncate_length,
            split_fraction: raw.split_fraction,
            methods,
            output_dir: resolve(raw.output_dir),
            seed: raw.seed,
            fit: FitOptions {
                drift_mode: raw.drift.as_deref().map(parse_drift_mode).transpose()?.unwrap_or_default(),
                linreg_intercept: raw.linreg_intercept,
            },
            mc_steps: raw.mc_steps,
            mc_trials: raw.mc_trials,
            mc_p_grid: raw.mc_p_grid,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::FileNotFound(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml_str(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.series.is_empty() {
            return invalid("at least one series is required");
        }
        if self.methods.is_empty() {
            return invalid("at least one method is required");
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return invalid("methods contain duplicates");
        }
        let mut names: Vec<&str> = self.series.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.series.len() {
            return invalid("series names must be unique");
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return invalid("split_fraction must lie strictly between 0 and 1");
        }
        if self.truncate_length < 4 {
            return invalid("truncate_length must be at least 4");
        }
        if self.mc_p_grid.iter().any(|p| !(*p > 0.0 && *p < 1.0)) {
            return invalid("mc_p_grid values must lie strictly between 0 and 1");
        }
        Ok(())
    }
}
