//! Spectral data `(p_j, λ_j)` for the finite-pole subspaces `W_n`.
//!
//! Each point `p_j` in the punctured unit disk is paired with its conjugate
//! `p̄_j`; the conjugate point carries `μ_j = -1/λ̄_j`, which is what makes the
//! resulting `g₋` land in the loop group.

use alloc::vec::Vec;

use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `|Im p_j|` must exceed this.
pub const MIN_IMAG_PART: f64 = 1e-8;
/// Minimum pairwise distance among `{p_j} ∪ {p̄_j}`.
pub const MIN_SEPARATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpectralError {
    #[error("spectral data is empty")]
    Empty,
    #[error("pair {index}: non-finite value")]
    NonFinite { index: usize },
    #[error("pair {index}: point {modulus} is not inside the punctured unit disk")]
    PointOutsideDisk { index: usize, modulus: f64 },
    #[error("pair {index}: point is (numerically) real, |Im p| = {imag:e}")]
    RealSpectralPoint { index: usize, imag: f64 },
    #[error("pairs {first} and {second}: points coincide (distance {distance:e}, conjugate: {conjugate})")]
    DuplicatePoint {
        first: usize,
        second: usize,
        distance: f64,
        conjugate: bool,
    },
    #[error("pair {index}: lambda is zero")]
    ZeroLambda { index: usize },
}

/// One spectral point and its interpolation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub point: Complex,
    pub lambda: Complex,
}

impl SpectralPair {
    pub fn new(point: Complex, lambda: Complex) -> Self {
        Self { point, lambda }
    }

    /// `μ = -1/λ̄`. Non-finite for `λ = 0`, which validation rules out.
    pub fn mu(&self) -> Complex {
        mu_unchecked(self.lambda)
    }
}

/// Validated spectral data. Construction enforces every invariant, so a
/// `SpectralData` value is always safe to hand to the Baker solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    pairs: Vec<SpectralPair>,
}

impl SpectralData {
    pub fn new(pairs: Vec<SpectralPair>) -> Result<Self, SpectralError> {
        validate(&pairs)?;
        Ok(Self { pairs })
    }

    pub fn from_soliton_params(params: &[SolitonParams]) -> Result<Self, SpectralError> {
        let pairs = params
            .iter()
            .enumerate()
            .map(|(index, p)| p.to_pair().map_err(|e| e.with_index(index)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(pairs)
    }

    pub fn pairs(&self) -> &[SpectralPair] {
        &self.pairs
    }

    /// Number of solitons `n`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl SpectralError {
    fn with_index(self, index: usize) -> Self {
        match self {
            SpectralError::NonFinite { .. } => SpectralError::NonFinite { index },
            SpectralError::PointOutsideDisk { modulus, .. } => {
                SpectralError::PointOutsideDisk { index, modulus }
            }
            SpectralError::RealSpectralPoint { imag, .. } => {
                SpectralError::RealSpectralPoint { index, imag }
            }
            SpectralError::ZeroLambda { .. } => SpectralError::ZeroLambda { index },
            other => other,
        }
    }
}

/// Checks every invariant of a list of spectral pairs.
pub fn validate(pairs: &[SpectralPair]) -> Result<(), SpectralError> {
    if pairs.is_empty() {
        return Err(SpectralError::Empty);
    }
    for (index, pair) in pairs.iter().enumerate() {
        let finite = [pair.point.re, pair.point.im, pair.lambda.re, pair.lambda.im]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(SpectralError::NonFinite { index });
        }
        let modulus = pair.point.norm();
        if !(modulus > 0.0 && modulus < 1.0) {
            return Err(SpectralError::PointOutsideDisk { index, modulus });
        }
        if pair.point.im.abs() <= MIN_IMAG_PART {
            return Err(SpectralError::RealSpectralPoint {
                index,
                imag: pair.point.im.abs(),
            });
        }
        derived_mu(pair.lambda).map_err(|e| e.with_index(index))?;
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (p, q) = (pairs[i].point, pairs[j].point);
            let direct = (p - q).norm();
            let conjugate = (p - q.conj()).norm();
            let (distance, is_conj) = if conjugate < direct {
                (conjugate, true)
            } else {
                (direct, false)
            };
            if distance <= MIN_SEPARATION {
                return Err(SpectralError::DuplicatePoint {
                    first: i,
                    second: j,
                    distance,
                    conjugate: is_conj,
                });
            }
        }
    }
    // p_j against its own conjugate is covered by the imaginary-part check.
    Ok(())
}

fn mu_unchecked(lambda: Complex) -> Complex {
    // -λ/|λ|² computed as -(λ/|λ|)/|λ| to avoid squaring tiny moduli.
    let r = lambda.norm();
    -(lambda / r) / r
}

/// `μ = -1/λ̄`, so that `λ μ̄ = -1`.
pub fn derived_mu(lambda: Complex) -> Result<Complex, SpectralError> {
    if lambda.norm() == 0.0 {
        return Err(SpectralError::ZeroLambda { index: 0 });
    }
    let mu = mu_unchecked(lambda);
    if !(mu.re.is_finite() && mu.im.is_finite()) {
        return Err(SpectralError::ZeroLambda { index: 0 });
    }
    Ok(mu)
}

/// `θ = 2(x p + t p²)`.
pub fn phase(p: Complex, x: f64, t: f64) -> Complex {
    (p * x + p * p * t) * 2.0
}

/// One-soliton parameters: `p = α + iβ`, `λ = e^{-2βx₀} e^{2iφ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub alpha: f64,
    pub beta: f64,
    pub x0: f64,
    pub phi: f64,
}

impl SolitonParams {
    pub fn new(alpha: f64, beta: f64, x0: f64, phi: f64) -> Self {
        Self {
            alpha,
            beta,
            x0,
            phi,
        }
    }

    pub fn point(&self) -> Complex {
        Complex::new(self.alpha, self.beta)
    }

    pub fn lambda(&self) -> Complex {
        Complex::from_polar(libm::exp(-2.0 * self.beta * self.x0), 2.0 * self.phi)
    }

    pub fn to_pair(&self) -> Result<SpectralPair, SpectralError> {
        let pair = SpectralPair::new(self.point(), self.lambda());
        validate(core::slice::from_ref(&pair))?;
        Ok(pair)
    }

    /// Inverse read-off: `x₀ = -ln|λ|/(2β)`, `φ = arg(λ)/2`.
    pub fn from_pair(pair: &SpectralPair) -> Self {
        let beta = pair.point.im;
        Self {
            alpha: pair.point.re,
            beta,
            x0: -libm::log(pair.lambda.norm()) / (2.0 * beta),
            phi: pair.lambda.arg() / 2.0,
        }
    }
}

pub fn from_soliton_params(params: &SolitonParams) -> Result<SpectralData, SpectralError> {
    SpectralData::from_soliton_params(core::slice::from_ref(params))
}
