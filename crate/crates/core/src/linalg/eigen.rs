use alloc::vec::Vec;

use super::matrix::{Matrix, SymMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: Matrix,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column `k` pairs with `values()[k]`.
    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for k in 0..d {
            let lambda = self.values[k];
            for i in 0..d {
                let vik = self.vectors[(i, k)] * lambda;
                for j in 0..d {
                    out[(i, j)] += vik * self.vectors[(j, k)];
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps until every off-diagonal magnitude is at most `1e-12·‖A‖_F`
/// (at most 100 sweeps). Eigenpairs come back sorted by descending
/// eigenvalue; exact ties keep the order of the coordinate they ended up on.
/// Each eigenvector is signed so that its largest-magnitude component is
/// positive, the lowest index winning ties in magnitude.
pub fn sym_eigendecompose(a: &SymMatrix) -> Result<EigenSystem> {
    let d = a.dim();
    let mut m = a.entries().clone();
    let mut v = Matrix::identity(d);
    let tol = OFF_DIAGONAL_TOL * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if max_off_diagonal(&m) <= tol {
            converged = true;
            break;
        }
        jacobi_sweep(&mut m, &mut v);
    }
    if !converged {
        return Err(Error::EigenNoConverge { sweeps: MAX_SWEEPS });
    }

    let raw: Vec<f64> = (0..d).map(|i| m[(i, i)]).collect();
    let mut order: Vec<usize> = (0..d).collect();
    // Stable sort keeps exact ties in coordinate order.
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap_or(core::cmp::Ordering::Equal));

    let mut vectors = Matrix::zeros(d, d);
    let mut values = Vec::with_capacity(d);
    for (k, &src) in order.iter().enumerate() {
        values.push(raw[src]);
        let col = v.column(src);
        let sign = canonical_sign(&col);
        for i in 0..d {
            vectors[(i, k)] = sign * col[i];
        }
    }
    Ok(EigenSystem { values, vectors })
}

fn max_off_diagonal(m: &Matrix) -> f64 {
    let d = m.rows();
    let mut max = 0.0_f64;
    for i in 0..d {
        for j in (i + 1)..d {
            max = max.max(m[(i, j)].abs());
        }
    }
    max
}

fn jacobi_sweep(m: &mut Matrix, v: &mut Matrix) {
    let d = m.rows();
    for p in 0..d {
        for q in (p + 1)..d {
            let apq = m[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
            let t = if theta.abs() > 1e150 {
                0.5 / theta
            } else {
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                sign / (theta.abs() + libm::sqrt(theta * theta + 1.0))
            };
            let c = 1.0 / libm::sqrt(t * t + 1.0);
            let s = t * c;

            for k in 0..d {
                if k == p || k == q {
                    continue;
                }
                let akp = m[(k, p)];
                let akq = m[(k, q)];
                let new_kp = c * akp - s * akq;
                let new_kq = s * akp + c * akq;
                m[(k, p)] = new_kp;
                m[(p, k)] = new_kp;
                m[(k, q)] = new_kq;
                m[(q, k)] = new_kq;
            }
            m[(p, p)] -= t * apq;
            m[(q, q)] += t * apq;
            m[(p, q)] = 0.0;
            m[(q, p)] = 0.0;

            for k in 0..d {
                let vkp = v[(k, p)];
                let vkq = v[(k, q)];
                v[(k, p)] = c * vkp - s * vkq;
                v[(k, q)] = s * vkp + c * vkq;
            }
        }
    }
}

// Magnitudes within a relative 1e-12 of the maximum count as tied.
fn canonical_sign(col: &[f64]) -> f64 {
    let max = col.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let lead = col.iter().find(|x| x.abs() >= max * (1.0 - 1e-12)).copied().unwrap_or(1.0);
    if lead < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `λ_r − λ_{r+1}` with 1-based `r`, `1 <= r < d`.
pub fn leading_eigengap(es: &EigenSystem, r: usize) -> Result<f64> {
    let d = es.dim();
    if r == 0 || r >= d {
        return Err(Error::IndexOutOfRange { index: r, limit: d });
    }
    Ok((es.values[r - 1] - es.values[r]).max(0.0))
}

/// Eigengap directly from an eigenvalue list sorted descending.
pub fn eigengap_of(values: &[f64], r: usize) -> Result<f64> {
    if r == 0 || r >= values.len() {
        return Err(Error::IndexOutOfRange { index: r, limit: values.len() });
    }
    Ok((values[r - 1] - values[r]).max(0.0))
}

/// First `r` eigenvector columns, a `d × r` orthonormal basis.
pub fn principal_subspace(es: &EigenSystem, r: usize) -> Result<Matrix> {
    let d = es.dim();
    if r == 0 || r > d {
        return Err(Error::IndexOutOfRange { index: r, limit: d });
    }
    let cols: Vec<usize> = (0..r).collect();
    es.vectors.select_columns(&cols)
}
