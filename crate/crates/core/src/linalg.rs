//! Dense complex LU factorization with partial pivoting for the small Baker
//! systems (`2n ≤ 40`).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64 as Complex;
use thiserror::Error;

/// Pivots at or below `PIVOT_FACTOR · max|entry|` count as zero.
pub const PIVOT_FACTOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular to working precision (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has the wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex] {
        let n = self.n;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Copy with column `j` replaced by `col`.
    pub fn with_column(&self, j: usize, col: &[Complex]) -> Self {
        let mut out = self.clone();
        for (i, v) in col.iter().enumerate() {
            out[(i, j)] = *v;
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

/// `P A = L U` with unit-diagonal `L` packed below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self, LinalgError> {
        let n = a.dim();
        let tol = PIVOT_FACTOR * a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if !(pivot > tol) {
                return Err(LinalgError::Singular { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let inv = Complex::new(1.0, 0.0) / lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] * inv;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn det(&self) -> Complex {
        let prod: Complex = (0..self.dim()).map(|k| self.lu[(k, k)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    pub fn solve(&self, b: &[Complex]) -> Result<Vec<Complex>, LinalgError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LinalgError::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        let mut y: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let yj = y[j];
                y[i] -= l * yj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let yj = y[j];
                y[i] -= u * yj;
            }
            y[i] /= self.lu[(i, i)];
        }
        Ok(y)
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex]) -> Result<Vec<Complex>, LinalgError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LinalgError::Dimension {
                expected: n,
                got: b.len(),
            });
        }
        // A^H = U^H L^H P, so solve U^H w = b, L^H v = w, then x = P^T v.
        let mut w = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let u = self.lu[(j, i)].conj();
                let wj = w[j];
                w[i] -= u * wj;
            }
            w[i] /= self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let l = self.lu[(j, i)].conj();
                let wj = w[j];
                w[i] -= l * wj;
            }
        }
        let mut x = vec![Complex::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = w[k];
        }
        Ok(x)
    }

    /// Hager–Higham estimate of `‖A⁻¹‖₁`.
    pub fn inverse_norm_one_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let mut x = vec![Complex::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let Ok(y) = self.solve(&x) else { break };
            estimate = y.iter().map(|c| c.norm()).sum::<f64>();
            let signs: Vec<Complex> = y
                .iter()
                .map(|c| {
                    let r = c.norm();
                    if r == 0.0 {
                        Complex::new(1.0, 0.0)
                    } else {
                        c / r
                    }
                })
                .collect();
            let Ok(z) = self.solve_adjoint(&signs) else {
                break;
            };
            let (j, zmax) = z
                .iter()
                .map(|c| c.norm())
                .enumerate()
                .fold(
                    (0, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|v| *v = Complex::new(0.0, 0.0));
            x[j] = Complex::new(1.0, 0.0);
        }
        estimate
    }
}

/// Determinant by partial-pivot elimination with no singularity cutoff;
/// an exactly zero pivot gives zero.
pub fn determinant(a: &CMatrix) -> Complex {
    let n = a.dim();
    let mut m = a.clone();
    let mut det = Complex::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].norm().total_cmp(&m[(j, k)].norm()))
            .unwrap_or(k);
        if m[(p, k)].norm() == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = tmp;
            }
            det = -det;
        }
        let pivot = m[(k, k)];
        det *= pivot;
        for i in k + 1..n {
            let f = m[(i, k)] / pivot;
            for j in k + 1..n {
                let u = m[(k, j)];
                m[(i, j)] -= f * u;
            }
        }
    }
    det
}

/// One-norm condition estimate `‖A‖₁ · est(‖A⁻¹‖₁)`.
pub fn condition_estimate(a: &CMatrix, lu: &Lu) -> f64 {
    a.norm_one() * lu.inverse_norm_one_estimate()
}

/// Divides each row (and its right-hand side entry) by the row's largest
/// modulus. The solution is unchanged.
pub fn equilibrate_rows(a: &mut CMatrix, rhs: &mut [Complex]) {
    for (i, r) in rhs.iter_mut().enumerate() {
        let scale = a.row(i).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale > 0.0 && scale.is_finite() {
            let inv = 1.0 / scale;
            a.row_mut(i).iter_mut().for_each(|c| *c *= inv);
            *r *= inv;
        }
    }
}
