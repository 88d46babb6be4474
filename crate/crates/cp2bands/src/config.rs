//! Run configuration: a flat key-value document with defaults, loadable from
//! TOML, with CLI flags overriding keys one for one.

use crate::chern::ChernConfig;
use crate::symbol::SearchConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Everything a run needs; every field has a working default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Polyad quantum number.
    pub n: u32,
    /// Inclusive lambda range swept by `spectrum`.
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Number of lambda grid points (endpoints included).
    pub lambda_steps: usize,
    /// Span-relative clustering factor: split at gaps > span / gap_factor.
    pub gap_factor: f64,
    /// (t, phi) grid on the projective line for first Chern integrals.
    pub line_grid_t: usize,
    pub line_grid_phi: usize,
    /// Per-axis resolution of the 4D chart grid (doubled once internally).
    pub volume_grid: usize,
    /// Quantization residual accepted for a topological invariant.
    pub residual_threshold: f64,
    /// Gap below which a degeneracy is declared in lambda-window scans.
    pub gap_tol: f64,
    /// Grid per axis and refinement sweeps of the phase-space gap search.
    pub search_grid: usize,
    pub search_sweeps: usize,
    /// Lambda scan resolution for `degeneracy`.
    pub window_resolution: usize,
    /// Seed for randomized multistarts (none are used by the deterministic
    /// search, but the key is reserved so configs stay stable).
    pub seed: u64,
    /// Output directory.
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 4,
            lambda_min: 0.0,
            lambda_max: 1.0,
            lambda_steps: 101,
            gap_factor: 5.0,
            line_grid_t: 128,
            line_grid_phi: 256,
            volume_grid: 24,
            residual_threshold: 0.05,
            gap_tol: 1e-6,
            search_grid: 16,
            search_sweeps: 64,
            window_resolution: 41,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: RunConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        if self.n == 0 {
            problems.push("n must be >= 1".to_string());
        }
        if !(0.0..=1.0).contains(&self.lambda_min) || !(0.0..=1.0).contains(&self.lambda_max) {
            problems.push("lambda range must sit inside [0, 1]".to_string());
        }
        if self.lambda_min > self.lambda_max {
            problems.push("lambda_min must not exceed lambda_max".to_string());
        }
        if self.lambda_steps == 0 {
            problems.push("lambda_steps must be >= 1".to_string());
        }
        if self.gap_factor <= 1.0 {
            problems.push("gap_factor must be > 1".to_string());
        }
        if self.line_grid_t < 4 || self.line_grid_phi < 4 {
            problems.push("line grid must be at least 4 x 4".to_string());
        }
        if self.volume_grid < 4 {
            problems.push("volume_grid must be >= 4".to_string());
        }
        if self.residual_threshold <= 0.0 || self.residual_threshold.is_nan() {
            problems.push("residual_threshold must be positive".to_string());
        }
        if self.gap_tol <= 0.0 || self.gap_tol.is_nan() {
            problems.push("gap_tol must be positive".to_string());
        }
        if self.search_grid < 2 {
            problems.push("search_grid must be >= 2".to_string());
        }
        if self.window_resolution < 2 {
            problems.push("window_resolution must be >= 2".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems.join("; ")))
        }
    }

    pub fn lambda_grid(&self) -> Vec<f64> {
        if self.lambda_steps == 1 {
            return vec![self.lambda_min];
        }
        let step = (self.lambda_max - self.lambda_min) / (self.lambda_steps - 1) as f64;
        (0..self.lambda_steps)
            .map(|k| self.lambda_min + k as f64 * step)
            .collect()
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            grid_per_axis: self.search_grid,
            refine_sweeps: self.search_sweeps,
        }
    }

    pub fn chern_config(&self) -> ChernConfig {
        ChernConfig {
            line_grid: (self.line_grid_t, self.line_grid_phi),
            volume_grid: self.volume_grid,
            residual_threshold: self.residual_threshold,
            search: self.search_config(),
        }
    }
}
