//! Baker functions for the `n`-soliton subspaces and the resulting NLS flow.
//!
//! For spectral data `(p_j, λ_j)` the Baker functions are
//!
//! ```text
//! Ψ₁ = ((1 + Σ a_k z⁻ᵏ) e^{-i(xz+tz²)},  (Σ c_k z⁻ᵏ) e^{i(xz+tz²)})
//! Ψ₂ = ((Σ b_k z⁻ᵏ) e^{-i(xz+tz²)},  (1 + Σ d_k z⁻ᵏ) e^{i(xz+tz²)})
//! ```
//!
//! and the interpolation conditions `f₁(p_j) = λ_j f₂(p_j)`,
//! `f₁(p̄_j) = μ_j f₂(p̄_j)` give two independent `2n × 2n` linear systems,
//! one for `(a, c)` and one for `(b, d)`. The flow is then
//! `g₋(x, t) = I + Σ A_k z⁻ᵏ` with `A_k = [[a_k, b_k], [c_k, d_k]]`, and
//! `u = b₁` solves the focusing NLS equation.
//!
//! The two systems are solved separately and the loop-group identities
//! `c_k = -b̄_k`, `d_k = ā_k` are checked afterwards, which doubles as a test
//! of the assembly.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as Complex;
use thiserror::Error;

use crate::linalg::{self, CMatrix, LinalgError, Lu};
use crate::loop_algebra::{C2Matrix, LaurentMatrix};
use crate::spectral::{phase, SolitonParams, SpectralData, SpectralError};

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

/// Log-modulus above which an exponential row factor is scaled out.
pub const OVERFLOW_LOG_MODULUS: f64 = 700.0;
/// Condition estimates above this are flagged.
pub const ILL_CONDITIONED: f64 = 1e12;
/// Largest tolerated `|c_k + b̄_k|`, `|d_k - ā_k|` (relative to coefficient size).
pub const STRUCTURE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BakerError {
    #[error("{system} system is singular: {source}")]
    SingularSystem {
        system: &'static str,
        source: LinalgError,
    },
    #[error("Baker system is ill-conditioned (estimate {estimate:e})")]
    IllConditioned { estimate: f64 },
    #[error("loop-group structure violated by {defect:e}")]
    StructureViolation { defect: f64 },
    #[error("Baker functions are not defined at z = 0")]
    ZeroArgument,
    #[error("determinant is zero to working precision (|det| = {det:e})")]
    SingularDeterminant { det: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// A square linear system `matrix · y = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: CMatrix,
    pub rhs: Vec<Complex>,
}

/// `e^{w}` together with a row scale that keeps it finite: if `Re w` exceeds
/// [`OVERFLOW_LOG_MODULUS`] the returned factor is `e^{w - Re w}` and the
/// row scale is `e^{-Re w}`.
fn scaled_exp(w: Complex) -> (Complex, f64) {
    if w.re > OVERFLOW_LOG_MODULUS {
        (Complex::from_polar(1.0, w.im), libm::exp(-w.re))
    } else {
        (w.exp(), 1.0)
    }
}

/// Interpolation nodes `(q, ν, θ)`: `q = 1/p`, `ν ∈ {λ_j, μ_j}` and the phase
/// at the node. Points first, then conjugate points.
fn nodes(data: &SpectralData, x: f64, t: f64) -> Vec<(Complex, Complex, Complex)> {
    let direct = data
        .pairs()
        .iter()
        .map(|p| (ONE / p.point, p.lambda, phase(p.point, x, t)));
    let conjugate = data.pairs().iter().map(|p| {
        let pc = p.point.conj();
        (ONE / pc, p.mu(), phase(pc, x, t))
    });
    direct.chain(conjugate).collect()
}

/// System for `(a_1..a_n, c_1..c_n)`:
/// `Σ_k ν e^{iθ} q^k c_k − q^k a_k = 1` at every node.
pub fn assemble_ac_system(data: &SpectralData, x: f64, t: f64) -> LinearSystem {
    let n = data.len();
    let mut matrix = CMatrix::zeros(2 * n);
    let mut rhs = vec![ONE; 2 * n];
    for (row, (q, nu, theta)) in nodes(data, x, t).into_iter().enumerate() {
        let (e, s) = scaled_exp(I * theta);
        let mut qk = ONE;
        for k in 0..n {
            qk *= q;
            matrix[(row, k)] = -qk * s;
            matrix[(row, n + k)] = nu * e * qk;
        }
        rhs[row] *= s;
    }
    LinearSystem { matrix, rhs }
}

/// System for `(b_1..b_n, d_1..d_n)`:
/// `Σ_k ν⁻¹ e^{-iθ} q^k b_k − q^k d_k = 1` at every node.
pub fn assemble_bd_system(data: &SpectralData, x: f64, t: f64) -> LinearSystem {
    let n = data.len();
    let mut matrix = CMatrix::zeros(2 * n);
    let mut rhs = vec![ONE; 2 * n];
    for (row, (q, nu, theta)) in nodes(data, x, t).into_iter().enumerate() {
        let (e, s) = scaled_exp(-I * theta);
        let nu_inv = ONE / nu;
        let mut qk = ONE;
        for k in 0..n {
            qk *= q;
            matrix[(row, k)] = nu_inv * e * qk;
            matrix[(row, n + k)] = -qk * s;
        }
        rhs[row] *= s;
    }
    LinearSystem { matrix, rhs }
}

fn solve_system(
    system: LinearSystem,
    name: &'static str,
) -> Result<(Vec<Complex>, f64), BakerError> {
    let LinearSystem {
        mut matrix,
        mut rhs,
    } = system;
    linalg::equilibrate_rows(&mut matrix, &mut rhs);
    let lu = Lu::factor(&matrix).map_err(|source| BakerError::SingularSystem {
        system: name,
        source,
    })?;
    let y = lu
        .solve(&rhs)
        .map_err(|source| BakerError::SingularSystem {
            system: name,
            source,
        })?;
    Ok((y, linalg::condition_estimate(&matrix, &lu)))
}

/// Coefficients exactly as returned by the two linear solves, before the
/// loop-group identities are imposed.
#[derive(Debug, Clone, PartialEq)]
pub struct RawBakerSolution {
    pub a: Vec<Complex>,
    pub b: Vec<Complex>,
    pub c: Vec<Complex>,
    pub d: Vec<Complex>,
    pub condition: f64,
}

impl RawBakerSolution {
    /// `max_k max(|c_k + b̄_k|, |d_k − ā_k|)`.
    pub fn structure_defect(&self) -> f64 {
        structure_defect(&self.a, &self.b, &self.c, &self.d)
    }
}

fn structure_defect(a: &[Complex], b: &[Complex], c: &[Complex], d: &[Complex]) -> f64 {
    let lower_left = c.iter().zip(b).map(|(c, b)| (c + b.conj()).norm());
    let lower_right = d.iter().zip(a).map(|(d, a)| (d - a.conj()).norm());
    lower_left.chain(lower_right).fold(0.0, f64::max)
}

fn coefficient_scale(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter().chain(b).map(|v| v.norm()).fold(1.0, f64::max)
}

pub fn solve_baker_raw(
    data: &SpectralData,
    x: f64,
    t: f64,
) -> Result<RawBakerSolution, BakerError> {
    let n = data.len();
    let (ac, cond_ac) = solve_system(assemble_ac_system(data, x, t), "(a, c)")?;
    let (bd, cond_bd) = solve_system(assemble_bd_system(data, x, t), "(b, d)")?;
    Ok(RawBakerSolution {
        a: ac[..n].to_vec(),
        c: ac[n..].to_vec(),
        b: bd[..n].to_vec(),
        d: bd[n..].to_vec(),
        condition: cond_ac.max(cond_bd),
    })
}

/// Baker coefficients at one `(x, t)` point with `c = -b̄`, `d = ā` imposed.
#[derive(Debug, Clone, PartialEq)]
pub struct BakerCoefficients {
    pub a: Vec<Complex>,
    pub b: Vec<Complex>,
    pub c: Vec<Complex>,
    pub d: Vec<Complex>,
    /// One-norm condition estimate of the worse of the two systems.
    pub condition: f64,
    /// Structure defect of the raw solve, before symmetrization.
    pub structure_defect: f64,
}

impl BakerCoefficients {
    /// The vacuum: all coefficients zero, `g₋ = I`.
    pub fn zeros(n: usize) -> Self {
        Self {
            a: vec![ZERO; n],
            b: vec![ZERO; n],
            c: vec![ZERO; n],
            d: vec![ZERO; n],
            condition: 1.0,
            structure_defect: 0.0,
        }
    }

    /// Builds from `(a, b)` with `c = -b̄`, `d = ā`.
    pub fn from_ab(a: Vec<Complex>, b: Vec<Complex>) -> Self {
        assert_eq!(a.len(), b.len());
        let c = b.iter().map(|v| -v.conj()).collect();
        let d = a.iter().map(|v| v.conj()).collect();
        Self {
            a,
            b,
            c,
            d,
            condition: 1.0,
            structure_defect: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `A_k` for `k ≥ 1`; zero above `n`.
    pub fn matrix(&self, k: usize) -> C2Matrix {
        assert!(k >= 1, "coefficients start at z^-1");
        if k > self.n() {
            return C2Matrix::ZERO;
        }
        let i = k - 1;
        C2Matrix::new(self.a[i], self.b[i], self.c[i], self.d[i])
    }

    /// `A_n`, the coefficient of the highest pole.
    pub fn lowest(&self) -> C2Matrix {
        self.matrix(self.n())
    }

    pub fn is_ill_conditioned(&self) -> bool {
        !(self.condition <= ILL_CONDITIONED)
    }

    pub fn check_conditioning(&self) -> Result<(), BakerError> {
        if self.is_ill_conditioned() {
            Err(BakerError::IllConditioned {
                estimate: self.condition,
            })
        } else {
            Ok(())
        }
    }

    fn current_defect(&self) -> f64 {
        structure_defect(&self.a, &self.b, &self.c, &self.d)
    }
}

/// Solves both Baker systems at `(x, t)` and imposes the loop-group
/// identities by averaging the two routes to each coefficient.
pub fn solve_baker(data: &SpectralData, x: f64, t: f64) -> Result<BakerCoefficients, BakerError> {
    let raw = solve_baker_raw(data, x, t)?;
    let defect = raw.structure_defect();
    if !(defect <= STRUCTURE_TOLERANCE * coefficient_scale(&raw.a, &raw.b)) {
        return Err(BakerError::StructureViolation { defect });
    }
    if raw.condition > ILL_CONDITIONED {
        log::warn!(
            "Baker system at (x, t) = ({x}, {t}) is ill-conditioned: {:e}",
            raw.condition
        );
    }
    let a: Vec<Complex> = raw
        .a
        .iter()
        .zip(&raw.d)
        .map(|(a, d)| (a + d.conj()) * 0.5)
        .collect();
    let b: Vec<Complex> = raw
        .b
        .iter()
        .zip(&raw.c)
        .map(|(b, c)| (b - c.conj()) * 0.5)
        .collect();
    let mut out = BakerCoefficients::from_ab(a, b);
    out.condition = raw.condition;
    out.structure_defect = defect;
    Ok(out)
}

/// `g₋(x, t) = I + Σ_{k=1}^n A_k z⁻ᵏ`.
pub fn g_minus(coeffs: &BakerCoefficients) -> Result<LaurentMatrix, BakerError> {
    let defect = coeffs.current_defect();
    if !(defect <= STRUCTURE_TOLERANCE * coefficient_scale(&coeffs.a, &coeffs.b)) {
        return Err(BakerError::StructureViolation { defect });
    }
    let n = coeffs.n();
    let mut terms: Vec<C2Matrix> = (1..=n).rev().map(|k| coeffs.matrix(k)).collect();
    terms.push(C2Matrix::IDENTITY);
    Ok(LaurentMatrix::new(-(n as i32), terms))
}

/// Which Baker function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BakerColumn {
    First,
    Second,
}

/// The pair `Ψ₁, Ψ₂` at a fixed `(x, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BakerFunctions {
    pub coeffs: BakerCoefficients,
    pub x: f64,
    pub t: f64,
}

impl BakerFunctions {
    pub fn new(data: &SpectralData, x: f64, t: f64) -> Result<Self, BakerError> {
        Ok(Self {
            coeffs: solve_baker(data, x, t)?,
            x,
            t,
        })
    }

    pub fn eval(&self, z: Complex, which: BakerColumn) -> Result<[Complex; 2], BakerError> {
        if z.norm() == 0.0 {
            return Err(BakerError::ZeroArgument);
        }
        let w = ONE / z;
        let poly = |cs: &[Complex]| cs.iter().rev().fold(ZERO, |acc, c| (acc + c) * w);
        let e = (-I * (z * self.x + z * z * self.t)).exp();
        let e_inv = ONE / e;
        let c = &self.coeffs;
        Ok(match which {
            BakerColumn::First => [(ONE + poly(&c.a)) * e, poly(&c.c) * e_inv],
            BakerColumn::Second => [poly(&c.b) * e, (ONE + poly(&c.d)) * e_inv],
        })
    }

    /// Largest scaled residual `|f₁ − ν f₂| / (1 + |f₁| + |ν f₂|)` of the
    /// interpolation conditions over both functions and all `2n` nodes.
    pub fn interpolation_residual(&self, data: &SpectralData) -> Result<f64, BakerError> {
        let mut worst: f64 = 0.0;
        for pair in data.pairs() {
            for (z, nu) in [(pair.point, pair.lambda), (pair.point.conj(), pair.mu())] {
                for which in [BakerColumn::First, BakerColumn::Second] {
                    let [f1, f2] = self.eval(z, which)?;
                    let r = (f1 - nu * f2).norm() / (1.0 + f1.norm() + (nu * f2).norm());
                    worst = worst.max(r);
                }
            }
        }
        Ok(worst)
    }
}

/// `u(x, t) = b₁(x, t)`.
pub fn nls_field(data: &SpectralData, x: f64, t: f64) -> Result<Complex, BakerError> {
    Ok(solve_baker(data, x, t)?.b[0])
}

/// Sign in front of `iβ tanh` in the closed-form `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TanhSign {
    /// `a = -α - iβ tanh ξ`, which is what the linear systems produce.
    Minus,
    /// `a = -α + iβ tanh ξ`, kept only as a negative control.
    Plus,
}

/// Closed-form one-soliton `(a, b)`:
///
/// ```text
/// ξ = 2β(x + 2αt + x₀)
/// a = -α - iβ tanh ξ
/// b = iβ exp[2i(αx + (α² − β²)t + φ)] sech ξ
/// ```
pub fn one_soliton_closed_form(p: &SolitonParams, x: f64, t: f64) -> (Complex, Complex) {
    one_soliton_closed_form_with(p, x, t, TanhSign::Minus)
}

pub fn one_soliton_closed_form_with(
    p: &SolitonParams,
    x: f64,
    t: f64,
    sign: TanhSign,
) -> (Complex, Complex) {
    let SolitonParams {
        alpha,
        beta,
        x0,
        phi,
    } = *p;
    let xi = 2.0 * beta * (x + 2.0 * alpha * t + x0);
    let tanh = libm::tanh(xi);
    let sech = 1.0 / libm::cosh(xi);
    let s = match sign {
        TanhSign::Minus => -1.0,
        TanhSign::Plus => 1.0,
    };
    let a = Complex::new(-alpha, s * beta * tanh);
    let carrier = Complex::from_polar(
        1.0,
        2.0 * (alpha * x + (alpha * alpha - beta * beta) * t + phi),
    );
    let b = I * beta * carrier * sech;
    (a, b)
}

/// Builds the Cramer matrices `(Δ, Δ₁)` for `b₁`. Rows are
/// `(q^k e^{-iθ} | -ν q^k)` with right-hand side `ν`; the common prefactor
/// `Π 1/(λ_j μ_j)` is dropped since only the ratio is used.
pub fn determinant_matrices(data: &SpectralData, x: f64, t: f64) -> (CMatrix, CMatrix) {
    let n = data.len();
    let mut delta = CMatrix::zeros(2 * n);
    let mut rhs = vec![ZERO; 2 * n];
    for (row, (q, nu, theta)) in nodes(data, x, t).into_iter().enumerate() {
        let (e, s) = scaled_exp(-I * theta);
        let mut qk = ONE;
        for k in 0..n {
            qk *= q;
            delta[(row, k)] = qk * e;
            delta[(row, n + k)] = -nu * qk * s;
        }
        rhs[row] = nu * s;
        // Row scaling multiplies Δ and Δ₁ alike.
        let scale = delta
            .row(row)
            .iter()
            .chain(core::iter::once(&rhs[row]))
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if scale > 0.0 {
            delta.row_mut(row).iter_mut().for_each(|c| *c /= scale);
            rhs[row] /= scale;
        }
    }
    let delta1 = delta.with_column(0, &rhs);
    (delta, delta1)
}

/// `b₁ = Δ₁ / Δ`, the determinant route to the NLS field.
pub fn nsoliton_determinant_b1(data: &SpectralData, x: f64, t: f64) -> Result<Complex, BakerError> {
    let (delta, delta1) = determinant_matrices(data, x, t);
    let det = linalg::determinant(&delta);
    let hadamard: f64 = (0..delta.dim())
        .map(|i| libm::sqrt(delta.row(i).iter().map(|c| c.norm_sqr()).sum::<f64>()))
        .product();
    if !(det.norm() > 1e-15 * hadamard) {
        return Err(BakerError::SingularDeterminant { det: det.norm() });
    }
    Ok(linalg::determinant(&delta1) / det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralPair;
    use core::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn one_soliton(alpha: f64, beta: f64, x0: f64, phi: f64) -> (SolitonParams, SpectralData) {
        let p = SolitonParams::new(alpha, beta, x0, phi);
        (p, SpectralData::from_soliton_params(&[p]).unwrap())
    }

    /// Direct 2×2 solve of the n = 1 (a, c) system by Cramer's rule,
    /// written out by hand.
    fn brute_force_ac(p: Complex, lambda: Complex, x: f64, t: f64) -> (Complex, Complex) {
        let mu = -ONE / lambda.conj();
        let e1 = lambda * (I * 2.0 * (p * x + p * p * t)).exp();
        let pc = p.conj();
        let e2 = mu * (I * 2.0 * (pc * x + pc * pc * t)).exp();
        // e1 c - a = p, e2 c - a = p̄
        let c = (p - pc) / (e1 - e2);
        let a = e1 * c - p;
        (a, c)
    }

    #[test]
    fn ac_assembly_at_origin() {
        let (_, data) = one_soliton(0.0, 0.4, 0.0, FRAC_PI_2);
        let sys = assemble_ac_system(&data, 0.0, 0.0);
        assert!((sys.matrix[(0, 0)] - c(0.0, 2.5)).norm() < 1e-14);
        assert!((sys.matrix[(0, 1)] - c(0.0, 2.5)).norm() < 1e-14);
        assert!((sys.matrix[(1, 0)] - c(0.0, -2.5)).norm() < 1e-14);
        assert!((sys.matrix[(1, 1)] - c(0.0, 2.5)).norm() < 1e-14);
        assert_eq!(sys.rhs, vec![ONE, ONE]);
    }

    #[test]
    fn bd_assembly_at_origin() {
        let (_, data) = one_soliton(0.0, 0.4, 0.0, FRAC_PI_2);
        let sys = assemble_bd_system(&data, 0.0, 0.0);
        assert!((sys.matrix[(0, 0)] - c(0.0, 2.5)).norm() < 1e-14);
        assert!((sys.matrix[(0, 1)] - c(0.0, 2.5)).norm() < 1e-14);

        let data = SpectralData::new(vec![
            SpectralPair::new(c(0.2, 0.5), c(1.0, 0.3)),
            SpectralPair::new(c(-0.4, 0.3), c(-0.5, 1.0)),
        ])
        .unwrap();
        let sys = assemble_bd_system(&data, 0.0, 0.0);
        assert_eq!(sys.matrix.dim(), 4);
        // d-columns are -q^k, a Vandermonde block without exponentials.
        for (row, pair) in data.pairs().iter().enumerate() {
            let q = ONE / pair.point;
            assert!((sys.matrix[(row, 2)] + q).norm() < 1e-14);
            assert!((sys.matrix[(row, 3)] + q * q).norm() < 1e-14);
            assert!((sys.matrix[(row, 0)] - q / pair.lambda).norm() < 1e-14);
        }
    }

    #[test]
    fn overflowing_rows_are_rescaled() {
        let (_, data) = one_soliton(0.0, 0.4, 0.0, 0.0);
        // Im θ = 0.8 x, so e^{iθ} overflows near x = -900.
        let sys = assemble_ac_system(&data, -1000.0, 0.0);
        assert!(sys.matrix.max_abs().is_finite());
        let sol = solve_baker(&data, -1000.0, 0.0).unwrap();
        assert!(sol
            .a
            .iter()
            .chain(&sol.b)
            .all(|v| v.re.is_finite() && v.im.is_finite()));
        assert!((sol.a[0] - c(0.0, 0.4)).norm() < 1e-12);
    }

    #[test]
    fn one_soliton_values_at_origin() {
        let (_, data) = one_soliton(0.0, 0.4, 0.0, FRAC_PI_2);
        let sol = solve_baker(&data, 0.0, 0.0).unwrap();
        assert!(sol.a[0].norm() < 1e-14);
        assert!((sol.b[0] - c(0.0, -0.4)).norm() < 1e-14);

        let (_, data) = one_soliton(0.3, 0.5, 0.0, 0.0);
        let sol = solve_baker(&data, 0.0, 0.0).unwrap();
        assert!((sol.a[0] + 0.3).norm() < 1e-9);
        assert!((sol.b[0].norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn solver_matches_brute_force_and_fixes_tanh_sign() {
        let (params, data) = one_soliton(0.25, 0.45, 0.3, 0.7);
        let pair = data.pairs()[0];
        for &(x, t) in &[(0.0, 0.0), (1.3, 0.0), (-0.8, 0.6), (2.1, -0.9)] {
            let sol = solve_baker(&data, x, t).unwrap();
            let (a_bf, c_bf) = brute_force_ac(pair.point, pair.lambda, x, t);
            assert!((sol.a[0] - a_bf).norm() < 1e-12);
            assert!((sol.c[0] - c_bf).norm() < 1e-12);

            let (a, b) = one_soliton_closed_form(&params, x, t);
            assert!((sol.a[0] - a).norm() < 1e-12, "a at ({x}, {t})");
            assert!((sol.b[0] - b).norm() < 1e-12, "b at ({x}, {t})");
        }
        // Away from ξ = 0 the + branch disagrees with the solve.
        let sol = solve_baker(&data, 1.3, 0.0).unwrap();
        let (a_plus, _) = one_soliton_closed_form_with(&params, 1.3, 0.0, TanhSign::Plus);
        assert!((sol.a[0] - a_plus).norm() > 0.1);
        assert!((sol.a[0].norm() - a_plus.norm()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_values() {
        let (a, b) = one_soliton_closed_form(&SolitonParams::new(0.3, 0.5, 0.0, 0.0), 0.0, 0.0);
        assert!((a - c(-0.3, 0.0)).norm() < 1e-15);
        assert!((b - c(0.0, 0.5)).norm() < 1e-15);
        let (_, b) =
            one_soliton_closed_form(&SolitonParams::new(0.0, 0.4, 0.0, FRAC_PI_2), 0.0, 0.0);
        assert!((b - c(0.0, -0.4)).norm() < 1e-15);
        // |b| is constant along x + 2αt + x₀ = const.
        let p = SolitonParams::new(0.3, 0.5, 0.2, 0.1);
        let (_, b0) = one_soliton_closed_form(&p, 0.7, 0.0);
        let (_, b1) = one_soliton_closed_form(&p, 0.7 - 2.0 * 0.3 * 1.5, 1.5);
        assert!((b0.norm() - b1.norm()).abs() < 1e-15);
    }

    #[test]
    fn nls_field_values_and_decay() {
        let (params, data) = one_soliton(0.0, 0.4, 0.0, 0.0);
        assert!((nls_field(&data, 0.0, 0.0).unwrap() - c(0.0, 0.4)).norm() < 1e-14);
        assert!(nls_field(&data, 40.0, 0.3).unwrap().norm() < 1e-6);
        assert!(nls_field(&data, -40.0, 0.3).unwrap().norm() < 1e-6);
        for &(x, t) in &[(0.5, 0.1), (-1.5, 0.9)] {
            let u = nls_field(&data, x, t).unwrap();
            let expected = params.beta / libm::cosh(2.0 * params.beta * x);
            assert!((u.norm() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn g_minus_shape() {
        let (_, data) = one_soliton(0.0, 0.4, 0.0, FRAC_PI_2);
        let g = g_minus(&solve_baker(&data, 0.0, 0.0).unwrap()).unwrap();
        let expected = LaurentMatrix::from_terms(&[
            (0, C2Matrix::IDENTITY),
            (-1, C2Matrix::new(ZERO, c(0.0, -0.4), c(0.0, -0.4), ZERO)),
        ]);
        assert!(g.max_abs_diff(&expected) < 1e-14);
        assert!(g.is_g_form(1e-12));
        assert_eq!(
            g_minus(&BakerCoefficients::zeros(0)).unwrap(),
            LaurentMatrix::identity()
        );

        let mut broken = BakerCoefficients::zeros(1);
        broken.c[0] = ONE;
        assert!(matches!(
            g_minus(&broken),
            Err(BakerError::StructureViolation { .. })
        ));
    }

    #[test]
    fn baker_functions_interpolate() {
        let data = SpectralData::new(vec![
            SpectralPair::new(c(0.2, 0.5), c(1.0, 0.3)),
            SpectralPair::new(c(-0.4, 0.3), c(-0.5, 1.0)),
        ])
        .unwrap();
        let f = BakerFunctions::new(&data, 0.4, -0.3).unwrap();
        assert!(f.interpolation_residual(&data).unwrap() < 1e-12);
        for pair in data.pairs() {
            let [f1, f2] = f.eval(pair.point, BakerColumn::First).unwrap();
            assert!((f1 - pair.lambda * f2).norm() < 1e-12);
            let [f1, f2] = f.eval(pair.point.conj(), BakerColumn::Second).unwrap();
            assert!((f1 - pair.mu() * f2).norm() < 1e-12);
        }
        assert_eq!(
            f.eval(ZERO, BakerColumn::First),
            Err(BakerError::ZeroArgument)
        );

        let f0 = BakerFunctions::new(&data, 0.0, 0.0).unwrap();
        let [u, v] = f0.eval(ONE, BakerColumn::First).unwrap();
        let co = &f0.coeffs;
        assert!((u - (ONE + co.a[0] + co.a[1])).norm() < 1e-14);
        assert!((v - (co.c[0] + co.c[1])).norm() < 1e-14);
    }

    #[test]
    fn determinant_route_agrees_with_solve() {
        let (_, data) = one_soliton(0.2, 0.35, -0.4, 1.0);
        for i in 0..21 {
            for j in 0..21 {
                let x = -4.0 + 8.0 * i as f64 / 20.0;
                let t = -1.0 + 2.0 * j as f64 / 20.0;
                let b = nls_field(&data, x, t).unwrap();
                let det = nsoliton_determinant_b1(&data, x, t).unwrap();
                assert!((det - b).norm() <= 1e-10 * b.norm(), "({x}, {t})");
            }
        }
        let data = SpectralData::new(vec![
            SpectralPair::new(c(0.2, 0.5), c(1.0, 0.3)),
            SpectralPair::new(c(-0.4, 0.3), c(-0.5, 1.0)),
        ])
        .unwrap();
        let (delta, _) = determinant_matrices(&data, 0.0, 0.0);
        // At the origin every exponential entry is 1, so column 0 is q / scale.
        for (row, pair) in data.pairs().iter().enumerate() {
            let q = ONE / pair.point;
            let ratio = delta[(row, 0)] / q;
            assert!(ratio.im.abs() < 1e-14 && ratio.re > 0.0);
        }
        for &(x, t) in &[(0.0, 0.0), (0.7, -0.2), (-1.1, 0.8)] {
            let b = nls_field(&data, x, t).unwrap();
            let det = nsoliton_determinant_b1(&data, x, t).unwrap();
            assert!((det - b).norm() <= 1e-8 * b.norm());
        }
    }
}
