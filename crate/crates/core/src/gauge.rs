//! The gauge map from NLS flows to Heisenberg magnet spin fields.
//!
//! With `A_N(x, t)` the coefficient of the highest pole of `g₋`, the HM frame
//! is `B₀(x, t) = A_N⁻¹(x, t) A_N(0, 0)` and the spin matrix is
//! `S = B₀⁻¹ σ₃ B₀ = [[S₃, S₁ − iS₂], [S₁ + iS₂, −S₃]]`.

use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baker::{solve_baker, BakerCoefficients, BakerError};
use crate::loop_algebra::{C2Matrix, LoopError};
use crate::spectral::SpectralData;

/// Smallest admissible `|a|² + |b|²` in the scalar formulas.
pub const DEGENERACY_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GaugeError {
    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("degenerate input: |a|² + |b|² = {norm:e}")]
    DegenerateInput { norm: f64 },
    #[error(transparent)]
    Baker(#[from] BakerError),
}

fn invert(m: &C2Matrix) -> Result<C2Matrix, GaugeError> {
    m.inverse().map_err(|e| match e {
        LoopError::SingularMatrix { det } => GaugeError::SingularMatrix { det },
        LoopError::OffUnitCircle { .. } => GaugeError::SingularMatrix {
            det: m.det().norm(),
        },
    })
}

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl SpinVector {
    pub const UP: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn norm_sqr(self) -> f64 {
        self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3
    }

    /// `|s1² + s2² + s3² − 1|`.
    pub fn norm_error(self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = [self.s1 - other.s1, self.s2 - other.s2, self.s3 - other.s3];
        d.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.s1.is_finite() && self.s2.is_finite() && self.s3.is_finite()
    }
}

/// `S = Σ S_k σ_k`, Hermitian, traceless and squaring to the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMatrix {
    pub m: C2Matrix,
}

impl SpinMatrix {
    pub fn from_vector(v: SpinVector) -> Self {
        let off = Complex::new(v.s1, v.s2);
        Self {
            m: C2Matrix::new(
                Complex::new(v.s3, 0.0),
                off.conj(),
                off,
                Complex::new(-v.s3, 0.0),
            ),
        }
    }

    pub fn to_vector(&self) -> SpinVector {
        let m = &self.m.m;
        SpinVector::new(m[1][0].re, m[1][0].im, m[0][0].re)
    }

    /// Largest violation among hermiticity, tracelessness and `S² = I`.
    pub fn invariant_defect(&self) -> f64 {
        let herm = self.m.max_abs_diff(&self.m.adjoint());
        let trace = self.m.trace().norm();
        let square = (self.m * self.m).max_abs_diff(&C2Matrix::IDENTITY);
        herm.max(trace).max(square)
    }
}

/// `B₀ = A_now⁻¹ · A_init`.
pub fn b0_matrix(a_now: &C2Matrix, a_init: &C2Matrix) -> Result<C2Matrix, GaugeError> {
    Ok(invert(a_now)? * *a_init)
}

/// `S = B₀⁻¹ σ₃ B₀`.
pub fn spin_matrix(b0: &C2Matrix) -> Result<SpinMatrix, GaugeError> {
    Ok(SpinMatrix {
        m: invert(b0)? * C2Matrix::SIGMA3 * *b0,
    })
}

/// The matrix path: `spin_matrix(b0_matrix(g(a, b), g(a₀, b₀)))` read off as
/// a vector.
pub fn spin_vector_matrix(
    a: Complex,
    b: Complex,
    a0: Complex,
    b0: Complex,
) -> Result<SpinVector, GaugeError> {
    let now = C2Matrix::g_form(a, b);
    let init = C2Matrix::g_form(a0, b0);
    Ok(spin_matrix(&b0_matrix(&now, &init)?)?.to_vector())
}

fn pair_norm(a: Complex, b: Complex) -> Result<f64, GaugeError> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if !(norm >= DEGENERACY_TOLERANCE) {
        return Err(GaugeError::DegenerateInput { norm });
    }
    Ok(norm)
}

/// Closed-form components of `B₀⁻¹σ₃B₀` for `A = [[a, b], [−b̄, ā]]`:
///
/// ```text
/// S₃      = [(|a|²−|b|²)(|a₀|²−|b₀|²) + 4 Re(ab · conj(a₀b₀))] / D
/// S₁ + iS₂ = 2[(|a|²−|b|²) a₀b̄₀ + ab b̄₀² − conj(ab) a₀²] / D
/// D       = (|a|²+|b|²)(|a₀|²+|b₀|²)
/// ```
pub fn spin_vector_scalar(
    a: Complex,
    b: Complex,
    a0: Complex,
    b0: Complex,
) -> Result<SpinVector, GaugeError> {
    let d = pair_norm(a, b)? * pair_norm(a0, b0)?;
    Ok(spin_numerators(a, b, a0, b0, d))
}

/// The same numerators over `(|a|²−|b|²)(|a₀|²−|b₀|²)`. Not a unit vector in
/// general; kept for negative controls.
pub fn spin_vector_printed_denominator(
    a: Complex,
    b: Complex,
    a0: Complex,
    b0: Complex,
) -> SpinVector {
    let d = (a.norm_sqr() - b.norm_sqr()) * (a0.norm_sqr() - b0.norm_sqr());
    spin_numerators(a, b, a0, b0, d)
}

fn spin_numerators(a: Complex, b: Complex, a0: Complex, b0: Complex, d: f64) -> SpinVector {
    let diff = a.norm_sqr() - b.norm_sqr();
    let diff0 = a0.norm_sqr() - b0.norm_sqr();
    let ab = a * b;
    let s3 = (diff * diff0 + 4.0 * (ab * (a0 * b0).conj()).re) / d;
    let transverse =
        (a0 * b0.conj() * diff + ab * b0.conj() * b0.conj() - ab.conj() * a0 * a0) * 2.0 / d;
    SpinVector::new(transverse.re, transverse.im, s3)
}

fn leading_pair(coeffs: &BakerCoefficients) -> (Complex, Complex) {
    let n = coeffs.n();
    (coeffs.a[n - 1], coeffs.b[n - 1])
}

/// Spin field evaluator holding the reference coefficient `A_N(0, 0)`.
#[derive(Debug, Clone)]
pub struct HmEvaluator {
    data: SpectralData,
    a0: Complex,
    b0: Complex,
}

impl HmEvaluator {
    pub fn new(data: SpectralData) -> Result<Self, GaugeError> {
        let (a0, b0) = leading_pair(&solve_baker(&data, 0.0, 0.0)?);
        pair_norm(a0, b0)?;
        Ok(Self { data, a0, b0 })
    }

    pub fn data(&self) -> &SpectralData {
        &self.data
    }

    /// `(a_N, b_N)` at the origin.
    pub fn reference(&self) -> (Complex, Complex) {
        (self.a0, self.b0)
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<SpinVector, GaugeError> {
        let (a, b) = leading_pair(&solve_baker(&self.data, x, t)?);
        spin_vector_scalar(a, b, self.a0, self.b0)
    }

    pub fn eval_matrix_path(&self, x: f64, t: f64) -> Result<SpinVector, GaugeError> {
        let coeffs = solve_baker(&self.data, x, t)?;
        let a_now = coeffs.lowest();
        let a_init = C2Matrix::g_form(self.a0, self.b0);
        Ok(spin_matrix(&b0_matrix(&a_now, &a_init)?)?.to_vector())
    }
}

/// `S(x, t)` for the given spectral data.
pub fn hm_field(data: &SpectralData, x: f64, t: f64) -> Result<SpinVector, GaugeError> {
    HmEvaluator::new(data.clone())?.eval(x, t)
}

/// The precessing domain wall with amplitude `α`:
///
/// ```text
/// S₁ = 2 cos(2α²t) tanh(2αx) sech(2αx)
/// S₂ = −2 sin(2α²t) tanh(2αx) sech(2αx)
/// S₃ = 2 sech²(2αx) − 1
/// ```
///
/// This is the gauge image of the one-soliton with `p = iα`, `λ = −1`.
pub fn precessing_wall(alpha: f64, x: f64, t: f64) -> SpinVector {
    let (th, s) = wall_profile(alpha, x);
    let w = 2.0 * alpha * alpha * t;
    SpinVector::new(
        2.0 * libm::cos(w) * th * s,
        -2.0 * libm::sin(w) * th * s,
        2.0 * s * s - 1.0,
    )
}

/// `∂S/∂x` of [`precessing_wall`].
pub fn precessing_wall_dx(alpha: f64, x: f64, t: f64) -> SpinVector {
    let (th, s) = wall_profile(alpha, x);
    let w = 2.0 * alpha * alpha * t;
    let profile = 4.0 * alpha * s * (s * s - th * th);
    SpinVector::new(
        libm::cos(w) * profile,
        -libm::sin(w) * profile,
        -8.0 * alpha * s * s * th,
    )
}

fn wall_profile(alpha: f64, x: f64) -> (f64, f64) {
    let xi = 2.0 * alpha * x;
    (libm::tanh(xi), 1.0 / libm::cosh(xi))
}
