//! TOML run configuration.
//!
//! ```toml
//! [[soliton]]          # or [[spectral]] with point = [re, im], lambda = [re, im]
//! alpha = 0.0
//! beta = 0.4
//! x0 = 0.0
//! phi = 0.0
//!
//! [grid]               # every key optional
//! xmin = -5.0
//! xmax = 5.0
//! nx = 201
//! tmin = -1.0
//! tmax = 1.0
//! nt = 101
//!
//! [output]
//! time_convention = "half"   # or "unit"
//! format = "csv"             # or "json"
//!
//! [tolerances]         # see `Tolerances` for the keys
//! ```

use std::fs;
use std::path::Path;

use birkhoff_core::spectral::{SolitonParams, SpectralData, SpectralError, SpectralPair};
use birkhoff_core::verify::{GridSpec, TimeConvention, VerifyError};
use birkhoff_core::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid spectral data: {0}")]
    Spectral(#[from] SpectralError),
    #[error("invalid grid: {0}")]
    Grid(#[from] VerifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Acceptance thresholds used by `verify` and `crosscheck`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Expected convergence order.
    pub order_target: f64,
    /// Allowed distance of the observed order from `order_target`.
    pub order_band: f64,
    /// Residuals below this on the finest level pass without an order check.
    pub roundoff_floor: f64,
    /// Largest `|S|² − 1`.
    pub unit_norm: f64,
    /// Largest drift of `∫|u|²dx` across slices.
    pub mass_drift: f64,
    /// Bound for the `z²` and `z³` zero-curvature coefficients.
    pub zcc_leading: f64,
    /// Determinant-vs-solve relative deviation.
    pub determinant: f64,
    /// Closed-form-vs-solve absolute deviation (`n = 1`).
    pub closed_form: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            order_target: 2.0,
            order_band: 0.4,
            roundoff_floor: 1e-11,
            unit_norm: 1e-10,
            mass_drift: 1e-6,
            zcc_leading: 1e-12,
            determinant: 1e-8,
            closed_form: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GridSection {
    xmin: f64,
    xmax: f64,
    nx: usize,
    tmin: f64,
    tmax: f64,
    nt: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            xmin: -5.0,
            xmax: 5.0,
            nx: 201,
            tmin: -1.0,
            tmax: 1.0,
            nt: 101,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OutputSection {
    time_convention: TimeConvention,
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolitonEntry {
    alpha: f64,
    beta: f64,
    x0: f64,
    phi: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralEntry {
    point: [f64; 2],
    lambda: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    soliton: Vec<SolitonEntry>,
    #[serde(default)]
    spectral: Vec<SpectralEntry>,
    #[serde(default)]
    grid: GridSection,
    #[serde(default)]
    output: OutputSection,
    #[serde(default)]
    tolerances: Tolerances,
}

/// Where the spectral data came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralSource {
    Solitons(Vec<SolitonParams>),
    Pairs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spectral: SpectralData,
    pub source: SpectralSource,
    pub grid: GridSpec,
    pub time_convention: TimeConvention,
    pub output_format: OutputFormat,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn n(&self) -> usize {
        self.spectral.len()
    }

    /// Soliton parameters when the data has exactly one pair.
    pub fn single_soliton(&self) -> Option<SolitonParams> {
        match self.spectral.pairs() {
            [pair] => Some(match &self.source {
                SpectralSource::Solitons(ps) => ps[0],
                SpectralSource::Pairs => SolitonParams::from_pair(pair),
            }),
            _ => None,
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    let (spectral, source) = match (raw.soliton.is_empty(), raw.spectral.is_empty()) {
        (false, false) => {
            let offset = text
                .find("[[spectral]]")
                .max(text.find("[[soliton]]"))
                .unwrap_or(0);
            let (line, column) = line_column(text, offset);
            return Err(ConfigError::Parse {
                line,
                column,
                message: "ambiguous source: both [[soliton]] and [[spectral]] given".into(),
            });
        }
        (true, true) => {
            return Err(ConfigError::Parse {
                line: 1,
                column: 1,
                message: "no spectral source: add [[soliton]] or [[spectral]] entries".into(),
            })
        }
        (false, true) => {
            let params: Vec<SolitonParams> = raw
                .soliton
                .iter()
                .map(|s| SolitonParams::new(s.alpha, s.beta, s.x0, s.phi))
                .collect();
            (
                SpectralData::from_soliton_params(&params)?,
                SpectralSource::Solitons(params),
            )
        }
        (true, false) => {
            let pairs = raw
                .spectral
                .iter()
                .map(|s| {
                    SpectralPair::new(
                        Complex::new(s.point[0], s.point[1]),
                        Complex::new(s.lambda[0], s.lambda[1]),
                    )
                })
                .collect();
            (SpectralData::new(pairs)?, SpectralSource::Pairs)
        }
    };
    let g = raw.grid;
    let grid = GridSpec::new(g.xmin, g.xmax, g.nx, g.tmin, g.tmax, g.nt)?;
    Ok(RunConfig {
        spectral,
        source,
        grid,
        time_convention: raw.output.time_convention,
        output_format: raw.output.format,
        tolerances: raw.tolerances,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}
