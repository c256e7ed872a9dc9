//! Lax pairs and zero-curvature residuals.
//!
//! NLS: `M̂₁ = σz + Q₁`, `M̂₂ = σz² + Q₁z + Q₀` with
//! `Q₁ = 2[[0, ib₁], [ib̄₁, 0]]` and `Q₀ = 2[[−i|b₁|², v], [−v̄, i|b₁|²]]`,
//! `v = i(b₂ − a₁b₁)`.
//!
//! HM: `M₁ = iSz`, `M₂ = iSz² + ½ S S_x z`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as Complex;
use serde::{Deserialize, Serialize};

use crate::baker::BakerCoefficients;
use crate::gauge::{SpinMatrix, SpinVector};
use crate::loop_algebra::{C2Matrix, LaurentMatrix};
use crate::verify::{Field, ResidualReport, VerifyError};

const I: Complex = Complex::new(0.0, 1.0);

/// `(M₁, M₂)`, polynomials in `z` of degree 1 and 2.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxPair {
    pub m1: LaurentMatrix,
    pub m2: LaurentMatrix,
}

impl LaxPair {
    pub fn vacuum() -> Self {
        Self {
            m1: LaurentMatrix::monomial(C2Matrix::SIGMA, 1),
            m2: LaurentMatrix::monomial(C2Matrix::SIGMA, 2),
        }
    }

    /// `[M₁(z⁰), M₁(z¹)]`.
    pub fn m1_coeffs(&self) -> [C2Matrix; 2] {
        [self.m1.coeff(0), self.m1.coeff(1)]
    }

    /// `[M₂(z⁰), M₂(z¹), M₂(z²)]`.
    pub fn m2_coeffs(&self) -> [C2Matrix; 3] {
        [self.m2.coeff(0), self.m2.coeff(1), self.m2.coeff(2)]
    }
}

fn coeff_or_zero(v: &[Complex], k: usize) -> Complex {
    v.get(k).copied().unwrap_or_default()
}

pub fn nls_lax_pair(coeffs: &BakerCoefficients) -> LaxPair {
    let a1 = coeff_or_zero(&coeffs.a, 0);
    let b1 = coeff_or_zero(&coeffs.b, 0);
    let b2 = coeff_or_zero(&coeffs.b, 1);
    let zero = Complex::default();
    let q1 = C2Matrix::new(zero, I * b1 * 2.0, I * b1.conj() * 2.0, zero);
    let v = I * (b2 - a1 * b1);
    let m = b1.norm_sqr();
    let q0 = C2Matrix::new(I * (-2.0 * m), v * 2.0, -v.conj() * 2.0, I * (2.0 * m));
    LaxPair {
        m1: LaurentMatrix::new(0, vec![q1, C2Matrix::SIGMA]),
        m2: LaurentMatrix::new(0, vec![q0, q1, C2Matrix::SIGMA]),
    }
}

/// Traceless Hermitian matrix `Σ v_k σ_k` of an arbitrary 3-vector.
pub fn pauli(v: SpinVector) -> C2Matrix {
    SpinMatrix::from_vector(v).m
}

pub fn hm_lax_pair(s: &SpinMatrix, sx: &C2Matrix) -> LaxPair {
    let is = s.m.scale(I);
    let zero = C2Matrix::ZERO;
    LaxPair {
        m1: LaurentMatrix::new(0, vec![zero, is]),
        m2: LaurentMatrix::new(0, vec![zero, (s.m * *sx).scale(Complex::new(0.5, 0.0)), is]),
    }
}

/// Per-power residuals of `∂_t M₁ − ∂_x M₂ + [M₁, M₂]`, `z⁰` through `z³`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZccReport {
    pub powers: Vec<ResidualReport>,
}

impl ZccReport {
    pub fn power(&self, k: usize) -> &ResidualReport {
        &self.powers[k]
    }
}

/// Evaluates the zero-curvature residual coefficient-wise with central
/// differences on interior nodes. Norms are Frobenius.
pub fn zcc_residual(pairs: &Field<LaxPair>) -> Result<ZccReport, VerifyError> {
    zcc_residual_with_notes(pairs, "")
}

pub fn zcc_residual_with_notes(
    pairs: &Field<LaxPair>,
    notes: &str,
) -> Result<ZccReport, VerifyError> {
    let g = *pairs.grid();
    g.validate()?;
    let coeffs: Vec<([C2Matrix; 2], [C2Matrix; 3])> = pairs
        .values()
        .iter()
        .map(|p| (p.m1_coeffs(), p.m2_coeffs()))
        .collect();
    for (idx, (m1, m2)) in coeffs.iter().enumerate() {
        if !m1
            .iter()
            .chain(m2)
            .flat_map(|m| m.entries())
            .all(|c| c.re.is_finite() && c.im.is_finite())
        {
            return Err(VerifyError::NonFiniteSample {
                x: g.x(idx % g.nx),
                t: g.t(idx / g.nx),
            });
        }
    }
    let (hx, ht) = (g.hx(), g.ht());
    let at = |i: usize, j: usize| &coeffs[g.index(i, j)];
    let mut samples: [Vec<f64>; 4] = Default::default();
    for j in 1..g.nt - 1 {
        for i in 1..g.nx - 1 {
            let (m1, m2) = at(i, j);
            let (m1_up, _) = at(i, j + 1);
            let (m1_down, _) = at(i, j - 1);
            let (_, m2_right) = at(i + 1, j);
            let (_, m2_left) = at(i - 1, j);
            let dt = |k: usize| (m1_up[k] - m1_down[k]).scale(Complex::new(0.5 / ht, 0.0));
            let dx = |k: usize| (m2_right[k] - m2_left[k]).scale(Complex::new(0.5 / hx, 0.0));
            let mut residual = [C2Matrix::ZERO; 4];
            for (k, r) in residual.iter_mut().enumerate() {
                if k < 2 {
                    *r = *r + dt(k);
                }
                if k < 3 {
                    *r = *r - dx(k);
                }
                for (p, m1p) in m1.iter().enumerate() {
                    if let Some(q) = k.checked_sub(p).filter(|&q| q < 3) {
                        *r = *r + m1p.commutator(&m2[q]);
                    }
                }
            }
            for (k, r) in residual.iter().enumerate() {
                samples[k].push(r.frobenius_norm());
            }
        }
    }
    let powers = samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut name = String::from("zcc_z");
            name.push(char::from(b'0' + k as u8));
            ResidualReport::from_samples(&name, &g, s.iter().copied()).with_notes(notes)
        })
        .collect();
    Ok(ZccReport { powers })
}
