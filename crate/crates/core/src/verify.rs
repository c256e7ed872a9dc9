//! Finite-difference residuals, invariants and convergence orders for
//! sampled fields.
//!
//! All derivatives are second-order central differences evaluated on interior
//! nodes; the outermost ring of nodes never enters a norm.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauge::SpinVector;

/// Minimum nodes per axis.
pub const MIN_NODES: usize = 5;
/// `|u|` at both x-boundaries must be below this for mass quadrature.
pub const BOUNDARY_DECAY: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("grid needs at least {MIN_NODES} nodes per axis, got {nx} × {nt}")]
    GridTooSmall { nx: usize, nt: usize },
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: &'static str },
    #[error("field has {got} samples, grid has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("non-finite sample at x = {x}, t = {t}")]
    NonFiniteSample { x: f64, t: f64 },
    #[error("|u| = {value:e} at x-boundary of slice t = {t} exceeds {BOUNDARY_DECAY:e}")]
    BoundaryNotDecayed { t: f64, value: f64 },
    #[error("fine grid does not halve both steps: hx {coarse_hx} -> {fine_hx}, ht {coarse_ht} -> {fine_ht}")]
    RefinementMismatch {
        coarse_hx: f64,
        fine_hx: f64,
        coarse_ht: f64,
        fine_ht: f64,
    },
}

/// Which normalization of the HM equation a spin field is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeConvention {
    /// `S_t = ½ S × S_xx`, the native gauge-map output.
    #[default]
    Half,
    /// `S_t = S × S_xx`, obtained by sampling at `(x, 2t)`.
    Unit,
}

impl TimeConvention {
    /// Coefficient of `S × S_xx`.
    pub fn coefficient(self) -> f64 {
        match self {
            TimeConvention::Half => 0.5,
            TimeConvention::Unit => 1.0,
        }
    }

    /// Time at which the native field is evaluated.
    pub fn sample_time(self, t: f64) -> f64 {
        match self {
            TimeConvention::Half => t,
            TimeConvention::Unit => 2.0 * t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TimeConvention::Half => "half",
            TimeConvention::Unit => "unit",
        }
    }
}

impl fmt::Display for TimeConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TimeConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "half" => Ok(TimeConvention::Half),
            "unit" => Ok(TimeConvention::Unit),
            other => Err(format!(
                "unknown time convention `{other}` (expected half or unit)"
            )),
        }
    }
}

/// Uniform tensor grid on `[xmin, xmax] × [tmin, tmax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub nx: usize,
    pub tmin: f64,
    pub tmax: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(
        xmin: f64,
        xmax: f64,
        nx: usize,
        tmin: f64,
        tmax: f64,
        nt: usize,
    ) -> Result<Self, VerifyError> {
        let g = Self {
            xmin,
            xmax,
            nx,
            tmin,
            tmax,
            nt,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if !(self.xmin.is_finite()
            && self.xmax.is_finite()
            && self.tmin.is_finite()
            && self.tmax.is_finite())
        {
            return Err(VerifyError::InvalidGrid {
                reason: "bounds must be finite",
            });
        }
        if !(self.xmax > self.xmin) {
            return Err(VerifyError::InvalidGrid {
                reason: "xmax must exceed xmin",
            });
        }
        if !(self.tmax > self.tmin) {
            return Err(VerifyError::InvalidGrid {
                reason: "tmax must exceed tmin",
            });
        }
        if self.nx < MIN_NODES || self.nt < MIN_NODES {
            return Err(VerifyError::GridTooSmall {
                nx: self.nx,
                nt: self.nt,
            });
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        (self.xmax - self.xmin) / (self.nx - 1) as f64
    }

    pub fn ht(&self) -> f64 {
        (self.tmax - self.tmin) / (self.nt - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.xmax
        } else {
            self.xmin + i as f64 * self.hx()
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        if j + 1 == self.nt {
            self.tmax
        } else {
            self.tmin + j as f64 * self.ht()
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of node `(i, j)`, `t`-major.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Same bounds with both steps halved.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx - 1,
            nt: 2 * self.nt - 1,
            ..*self
        }
    }

    /// `(x, t)` of every node in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.nt).flat_map(move |j| (0..self.nx).map(move |i| (self.x(i), self.t(j))))
    }
}

/// Samples on a [`GridSpec`], stored `t`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: GridSpec,
    values: Vec<T>,
}

impl<T> Field<T> {
    pub fn new(grid: GridSpec, values: Vec<T>) -> Result<Self, VerifyError> {
        if values.len() != grid.len() {
            return Err(VerifyError::SizeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> T) -> Self {
        let values = grid.nodes().map(|(x, t)| f(x, t)).collect();
        Self { grid, values }
    }

    pub fn try_from_fn<E>(
        grid: GridSpec,
        mut f: impl FnMut(f64, f64) -> Result<T, E>,
    ) -> Result<Self, E> {
        let values = grid
            .nodes()
            .map(|(x, t)| f(x, t))
            .collect::<Result<_, _>>()?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.values[self.grid.index(i, j)]
    }

    /// The `x`-row at time index `j`.
    pub fn slice(&self, j: usize) -> &[T] {
        let start = self.grid.index(0, j);
        &self.values[start..start + self.grid.nx]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// Summary of a pointwise residual over the interior of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub quantity: String,
    pub max_norm: f64,
    pub rms_norm: f64,
    pub hx: f64,
    pub ht: f64,
    pub observed_order: Option<f64>,
    pub notes: String,
}

impl ResidualReport {
    pub fn from_samples(
        quantity: &str,
        grid: &GridSpec,
        samples: impl IntoIterator<Item = f64>,
    ) -> Self {
        let (mut max, mut sum, mut count) = (0.0f64, 0.0f64, 0usize);
        for r in samples {
            max = if r.is_nan() { f64::NAN } else { max.max(r) };
            sum += r * r;
            count += 1;
        }
        let rms = if count == 0 {
            0.0
        } else {
            libm::sqrt(sum / count as f64)
        };
        Self {
            quantity: quantity.into(),
            max_norm: max,
            rms_norm: rms,
            hx: grid.hx(),
            ht: grid.ht(),
            observed_order: None,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }
}

/// `log₂(coarse.max / fine.max)`; `None` when both residuals vanish.
pub fn convergence_order(
    coarse: &ResidualReport,
    fine: &ResidualReport,
) -> Result<Option<f64>, VerifyError> {
    let halves = |c: f64, f: f64| (c - 2.0 * f).abs() <= 1e-9 * c;
    if !(halves(coarse.hx, fine.hx) && halves(coarse.ht, fine.ht)) {
        return Err(VerifyError::RefinementMismatch {
            coarse_hx: coarse.hx,
            fine_hx: fine.hx,
            coarse_ht: coarse.ht,
            fine_ht: fine.ht,
        });
    }
    if coarse.max_norm == 0.0 && fine.max_norm == 0.0 {
        return Ok(None);
    }
    Ok(Some(libm::log2(coarse.max_norm / fine.max_norm)))
}

/// Returns `fine` with `observed_order` filled in from `coarse`.
pub fn with_order(
    coarse: &ResidualReport,
    mut fine: ResidualReport,
) -> Result<ResidualReport, VerifyError> {
    fine.observed_order = convergence_order(coarse, &fine)?;
    Ok(fine)
}

fn interior(grid: &GridSpec) -> impl Iterator<Item = (usize, usize)> + '_ {
    (1..grid.nt - 1).flat_map(move |j| (1..grid.nx - 1).map(move |i| (i, j)))
}

fn check_finite<T>(field: &Field<T>, finite: impl Fn(&T) -> bool) -> Result<(), VerifyError> {
    field.grid.validate()?;
    for (j, row) in field.values.chunks(field.grid.nx).enumerate() {
        if let Some(i) = row.iter().position(|v| !finite(v)) {
            return Err(VerifyError::NonFiniteSample {
                x: field.grid.x(i),
                t: field.grid.t(j),
            });
        }
    }
    Ok(())
}

fn complex_finite(u: &Complex) -> bool {
    u.re.is_finite() && u.im.is_finite()
}

/// `i u_t − ½ u_xx − 4 u |u|²` on interior nodes.
pub fn nls_residual(u: &Field<Complex>) -> Result<ResidualReport, VerifyError> {
    check_finite(u, complex_finite)?;
    let g = u.grid;
    let (hx, ht) = (g.hx(), g.ht());
    let i_unit = Complex::new(0.0, 1.0);
    let samples = interior(&g).map(|(i, j)| {
        let c = *u.at(i, j);
        let ut = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * ht);
        let uxx = (u.at(i + 1, j) - c * 2.0 + u.at(i - 1, j)) / (hx * hx);
        (i_unit * ut - uxx * 0.5 - c * (4.0 * c.norm_sqr())).norm()
    });
    Ok(ResidualReport::from_samples("nls_residual", &g, samples))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `S_t − κ S × S_xx` on interior nodes, with `κ = ½` (half) or `1` (unit).
pub fn hm_residual(
    s: &Field<SpinVector>,
    convention: TimeConvention,
) -> Result<ResidualReport, VerifyError> {
    check_finite(s, |v| v.is_finite())?;
    let g = s.grid;
    let (hx, ht) = (g.hx(), g.ht());
    let kappa = convention.coefficient();
    let at = |i: usize, j: usize| s.at(i, j).to_array();
    let samples = interior(&g).map(|(i, j)| {
        let c = at(i, j);
        let (up, down, left, right) = (at(i, j + 1), at(i, j - 1), at(i - 1, j), at(i + 1, j));
        let mut st = [0.0; 3];
        let mut sxx = [0.0; 3];
        for k in 0..3 {
            st[k] = (up[k] - down[k]) / (2.0 * ht);
            sxx[k] = (right[k] - 2.0 * c[k] + left[k]) / (hx * hx);
        }
        let torque = cross(c, sxx);
        let r: f64 = (0..3)
            .map(|k| st[k] - kappa * torque[k])
            .map(|d| d * d)
            .sum();
        libm::sqrt(r)
    });
    let quantity = match convention {
        TimeConvention::Half => "hm_residual_half",
        TimeConvention::Unit => "hm_residual_unit",
    };
    Ok(ResidualReport::from_samples(quantity, &g, samples))
}

/// `max |s1² + s2² + s3² − 1|` over every node, boundary included.
pub fn unit_norm_check(s: &Field<SpinVector>) -> ResidualReport {
    ResidualReport::from_samples(
        "unit_norm",
        &s.grid,
        s.values.iter().map(|v| v.norm_error()),
    )
}

/// Trapezoidal `∫|u|² dx` for every time slice.
pub fn slice_masses(u: &Field<Complex>) -> Result<Vec<f64>, VerifyError> {
    check_finite(u, complex_finite)?;
    let g = u.grid;
    (0..g.nt)
        .map(|j| {
            let row = u.slice(j);
            let edge = row[0].norm().max(row[g.nx - 1].norm());
            if !(edge < BOUNDARY_DECAY) {
                return Err(VerifyError::BoundaryNotDecayed {
                    t: g.t(j),
                    value: edge,
                });
            }
            let inner: f64 = row[1..g.nx - 1].iter().map(|v| v.norm_sqr()).sum();
            let ends = 0.5 * (row[0].norm_sqr() + row[g.nx - 1].norm_sqr());
            Ok((inner + ends) * g.hx())
        })
        .collect()
}

/// Deviation of each slice mass from the first slice.
pub fn mass_conservation(u: &Field<Complex>) -> Result<ResidualReport, VerifyError> {
    let masses = slice_masses(u)?;
    let reference = masses[0];
    let report = ResidualReport::from_samples(
        "mass_drift",
        &u.grid,
        masses.iter().map(|m| (m - reference).abs()),
    );
    let mean = masses.iter().sum::<f64>() / masses.len() as f64;
    Ok(report.with_notes(format!(
        "mean mass {mean:.12e} over {} slices",
        masses.len()
    )))
}

/// `∂/∂x` of a spin field: central differences inside, second-order
/// one-sided stencils at the two ends of each row.
pub fn spin_x_derivative(s: &Field<SpinVector>) -> Field<SpinVector> {
    let g = s.grid;
    let h = g.hx();
    let mut out = Vec::with_capacity(g.len());
    for j in 0..g.nt {
        let row = s.slice(j);
        for i in 0..g.nx {
            let v = |k: usize| row[k].to_array();
            let mut d = [0.0; 3];
            for (c, dc) in d.iter_mut().enumerate() {
                *dc = if i == 0 {
                    (-3.0 * v(0)[c] + 4.0 * v(1)[c] - v(2)[c]) / (2.0 * h)
                } else if i + 1 == g.nx {
                    (3.0 * v(i)[c] - 4.0 * v(i - 1)[c] + v(i - 2)[c]) / (2.0 * h)
                } else {
                    (v(i + 1)[c] - v(i - 1)[c]) / (2.0 * h)
                };
            }
            out.push(SpinVector::from_array(d));
        }
    }
    Field {
        grid: g,
        values: out,
    }
}
