//! Complex 2×2 matrices and matrix-valued Laurent polynomials in the spectral
//! variable `z`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as Complex;
use thiserror::Error;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

/// Relative factor for the singularity test in [`C2Matrix::inverse`].
pub const SINGULARITY_FACTOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LoopError {
    #[error("singular 2x2 matrix (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("evaluation point is off the unit circle (|z| = {modulus})")]
    OffUnitCircle { modulus: f64 },
}

/// A complex 2×2 matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Matrix {
    pub m: [[Complex; 2]; 2],
}

impl C2Matrix {
    pub const ZERO: Self = Self::new(ZERO, ZERO, ZERO, ZERO);
    pub const IDENTITY: Self = Self::new(ONE, ZERO, ZERO, ONE);
    /// Pauli matrix σ₁.
    pub const SIGMA1: Self = Self::new(ZERO, ONE, ONE, ZERO);
    /// Pauli matrix σ₂.
    pub const SIGMA2: Self = Self::new(ZERO, Complex::new(0.0, -1.0), I, ZERO);
    /// Pauli matrix σ₃.
    pub const SIGMA3: Self = Self::new(ONE, ZERO, ZERO, Complex::new(-1.0, 0.0));
    /// The flow generator σ = iσ₃.
    pub const SIGMA: Self = Self::new(I, ZERO, ZERO, Complex::new(0.0, -1.0));

    pub const fn new(m00: Complex, m01: Complex, m10: Complex, m11: Complex) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    /// The loop-group shape `[[a, b], [-b̄, ā]]`.
    pub fn g_form(a: Complex, b: Complex) -> Self {
        Self::new(a, b, -b.conj(), a.conj())
    }

    pub fn scalar(c: Complex) -> Self {
        Self::new(c, ZERO, ZERO, c)
    }

    pub fn det(&self) -> Complex {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex {
        self.m[0][0] + self.m[1][1]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(
            self.m[0][0] * c,
            self.m[0][1] * c,
            self.m[1][0] * c,
            self.m[1][1] * c,
        )
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries().map(|c| c.norm_sqr()).sum::<f64>())
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex> + '_ {
        self.m.iter().flat_map(|row| row.iter().copied())
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// Cofactor inverse. Fails when `|det| ≤ 1e-14 · max|entry|²`.
    pub fn inverse(&self) -> Result<Self, LoopError> {
        let det = self.det();
        let scale = self.max_abs();
        if !(det.norm() > SINGULARITY_FACTOR * scale * scale) {
            return Err(LoopError::SingularMatrix { det: det.norm() });
        }
        let inv = ONE / det;
        Ok(Self::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        ))
    }

    /// True when the matrix has the shape `[[a, b], [-b̄, ā]]` within `tol`.
    pub fn is_g_form(&self, tol: f64) -> bool {
        (self.m[1][0] + self.m[0][1].conj()).norm() <= tol
            && (self.m[1][1] - self.m[0][0].conj()).norm() <= tol
    }

    /// True when `C† = -C` within `tol`.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.adjoint().max_abs_diff(&-*self) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.adjoint().max_abs_diff(self) <= tol
    }
}

impl Default for C2Matrix {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for C2Matrix {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Add for C2Matrix {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (row, rrow) in out.m.iter_mut().zip(rhs.m.iter()) {
            for (x, y) in row.iter_mut().zip(rrow.iter()) {
                *x += *y;
            }
        }
        out
    }
}

impl Sub for C2Matrix {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for C2Matrix {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

pub fn mat_mul(a: &C2Matrix, b: &C2Matrix) -> C2Matrix {
    *a * *b
}

pub fn mat_inv(a: &C2Matrix) -> Result<C2Matrix, LoopError> {
    a.inverse()
}

/// Which powers of `z` a projection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `k ≥ 1`.
    StrictlyPositive,
    /// `k ≥ 0`.
    NonNegative,
}

impl Projection {
    fn lowest_kept(self) -> i32 {
        match self {
            Projection::StrictlyPositive => 1,
            Projection::NonNegative => 0,
        }
    }
}

/// `Σ_{k=min_exp}^{max_exp} C_k z^k` with dense coefficient storage.
///
/// An empty coefficient vector is the zero polynomial. Equality compares the
/// represented polynomials, so zero padding does not matter.
#[derive(Debug, Clone, Default)]
pub struct LaurentMatrix {
    min_exp: i32,
    coeffs: Vec<C2Matrix>,
}

impl LaurentMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(min_exp: i32, coeffs: Vec<C2Matrix>) -> Self {
        Self { min_exp, coeffs }
    }

    pub fn constant(m: C2Matrix) -> Self {
        Self::monomial(m, 0)
    }

    pub fn identity() -> Self {
        Self::constant(C2Matrix::IDENTITY)
    }

    pub fn monomial(m: C2Matrix, k: i32) -> Self {
        Self::new(k, vec![m])
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms(terms: &[(i32, C2Matrix)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(), |acc, &(k, m)| &acc + &Self::monomial(m, k))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest stored exponent, `None` for the zero polynomial.
    pub fn min_exp(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.min_exp)
    }

    pub fn max_exp(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then(|| self.min_exp + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `z^k`; zero outside the stored range.
    pub fn coeff(&self, k: i32) -> C2Matrix {
        let idx = k - self.min_exp;
        if idx < 0 {
            return C2Matrix::ZERO;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or_default()
    }

    /// Iterates `(exponent, coefficient)` over the stored range.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C2Matrix)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.min_exp + i as i32, c))
    }

    pub fn eval(&self, z: Complex) -> C2Matrix {
        self.terms()
            .fold(C2Matrix::ZERO, |acc, (k, c)| acc + c.scale(z.powi(k)))
    }

    /// Evaluation restricted to `|z| = 1` (to 1e-12).
    pub fn eval_on_circle(&self, z: Complex) -> Result<C2Matrix, LoopError> {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(LoopError::OffUnitCircle { modulus });
        }
        Ok(self.eval(z))
    }

    /// Keeps the powers selected by `mode`.
    pub fn project(&self, mode: Projection) -> Self {
        let lo = mode.lowest_kept();
        self.filter(|k| k >= lo)
    }

    /// Keeps the powers discarded by `mode`.
    pub fn project_complement(&self, mode: Projection) -> Self {
        let lo = mode.lowest_kept();
        self.filter(|k| k < lo)
    }

    fn filter(&self, keep: impl Fn(i32) -> bool) -> Self {
        let kept: Vec<(i32, C2Matrix)> = self
            .terms()
            .filter(|(k, _)| keep(*k))
            .map(|(k, c)| (k, *c))
            .collect();
        match kept.first() {
            None => Self::zero(),
            Some(&(lo, _)) => Self::new(lo, kept.into_iter().map(|(_, c)| c).collect()),
        }
    }

    /// Coefficient-wise structure test for membership in the loop group.
    pub fn is_g_form(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_g_form(tol))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self::new(
            self.min_exp,
            self.coeffs.iter().map(|m| m.scale(c)).collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = self - other;
        diff.coeffs
            .iter()
            .map(C2Matrix::max_abs)
            .fold(0.0, f64::max)
    }

    fn combine(&self, other: &Self, f: impl Fn(C2Matrix, C2Matrix) -> C2Matrix) -> Self {
        let (lo, hi) = match (self.min_exp(), other.min_exp()) {
            (None, None) => return Self::zero(),
            (Some(_), None) => (self.min_exp, self.max_exp().unwrap()),
            (None, Some(_)) => (other.min_exp, other.max_exp().unwrap()),
            (Some(a), Some(b)) => (
                a.min(b),
                self.max_exp().unwrap().max(other.max_exp().unwrap()),
            ),
        };
        Self::new(
            lo,
            (lo..=hi)
                .map(|k| f(self.coeff(k), other.coeff(k)))
                .collect(),
        )
    }
}

impl PartialEq for LaurentMatrix {
    fn eq(&self, other: &Self) -> bool {
        let diff = self - other;
        diff.coeffs.iter().all(|c| *c == C2Matrix::ZERO)
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.combine(rhs, |a, b| a - b)
    }
}

/// Cauchy product over the full Minkowski sum of the exponent ranges.
impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        if self.is_empty() || rhs.is_empty() {
            return LaurentMatrix::zero();
        }
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![C2Matrix::ZERO; len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        LaurentMatrix::new(self.min_exp + rhs.min_exp, out)
    }
}

pub fn laurent_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> LaurentMatrix {
    a * b
}
