//! Run configuration: defaults, then an optional JSON file, then flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use lienard_core::{AmbiguityParams, Model, PhysicalParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Directory used for output files when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "LIENARD_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub omega: f64,
    pub k: f64,
    pub hbar: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub n_max: usize,
    /// Level sampled by `wavefn`.
    pub level: usize,
    /// Interior points of the `y` grid.
    pub points: usize,
    pub y_max: f64,
    /// Momentum grid spacing.
    pub h_p: f64,
    pub k_values: Vec<f64>,
    pub amplitude: f64,
    pub phase: f64,
    /// Integration span; one period `2 pi / w` when absent.
    pub t_end: Option<f64>,
    pub step: f64,
    /// Sweep axes.
    pub omega_values: Vec<f64>,
    pub alpha_gamma_values: Vec<f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            k: 1.0,
            hbar: 1.0,
            alpha: 0.0,
            gamma: 0.0,
            n_max: 3,
            level: 0,
            points: 12001,
            y_max: 150.0,
            h_p: 1e-3,
            k_values: vec![1e-1, 1e-2, 1e-3],
            amplitude: 1.0,
            phase: 0.0,
            t_end: None,
            step: 1e-3,
            omega_values: vec![1.0, 2.0],
            alpha_gamma_values: vec![0.0, 19.0],
            output: None,
            format: Format::Csv,
        }
    }
}

/// Every field optional, so a file or the flags can set any subset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Level sampled by `wavefn`.
    #[arg(long)]
    pub level: Option<usize>,
    /// Interior points of the y grid.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    /// Momentum grid spacing.
    #[arg(long, allow_hyphen_values = true)]
    pub h_p: Option<f64>,
    /// Comma-separated, strictly decreasing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k_values: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub step: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub omega_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha_gamma_values: Option<Vec<f64>>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($cfg:expr, $src:expr, $($field:ident),*) => {
        $(if let Some(v) = $src.$field.clone() { $cfg.$field = v; })*
    };
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        overlay!(self, o, omega, k, hbar, alpha, gamma, n_max, level, points, y_max, h_p, k_values, amplitude, phase, step, omega_values, alpha_gamma_values, format);
        if o.t_end.is_some() {
            self.t_end = o.t_end;
        }
        if o.output.is_some() {
            self.output = o.output.clone();
        }
    }

    /// Defaults, then `file` if given, then `flags`.
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
            let from_file: Overrides = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            cfg.apply(&from_file);
        }
        cfg.apply(flags);
        Ok(cfg)
    }

    pub fn physical(&self) -> Result<PhysicalParams, CliError> {
        Ok(PhysicalParams::new(self.k, self.omega, self.hbar)?)
    }

    pub fn ambiguity(&self) -> Result<AmbiguityParams, CliError> {
        Ok(AmbiguityParams::new(self.alpha, self.gamma)?)
    }

    pub fn model(&self) -> Result<Model, CliError> {
        Ok(Model::new(self.physical()?, self.ambiguity()?)?)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or(2.0 * std::f64::consts::PI / self.omega)
    }

    /// Where a command's main output goes.
    pub fn output_path(&self, command: &str) -> PathBuf {
        if let Some(path) = &self.output {
            return path.clone();
        }
        let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{command}.{}", self.format.extension()))
    }

    /// Parameter echo written next to every output.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
