use super::eigen::sym_eigendecompose;
use super::matrix::{Matrix, MatrixKind, SymMatrix};
use crate::error::{Error, Result};

const ORTHONORMAL_TOL: f64 = 1e-8;

fn check_orthonormal(u: &Matrix) -> Result<()> {
    let gram = u.transpose_matmul(u)?;
    let r = gram.rows();
    for i in 0..r {
        for j in 0..r {
            let target = if i == j { 1.0 } else { 0.0 };
            if (gram[(i, j)] - target).abs() > ORTHONORMAL_TOL {
                return Err(Error::InvalidSubspace);
            }
        }
    }
    Ok(())
}

/// Spectral norm of `sin Θ(U, V)` between two `r`-dimensional subspaces.
///
/// With `M = UᵀV`, the largest principal angle has cosine `σ_min(M)`, which
/// is read off the smallest eigenvalue of `MᵀM`.
pub fn subspace_sin_theta(u: &Matrix, v: &Matrix) -> Result<f64> {
    if u.rows() != v.rows() {
        return Err(Error::ShapeMismatch { expected: u.rows(), found: v.rows() });
    }
    if u.cols() != v.cols() {
        return Err(Error::ShapeMismatch { expected: u.cols(), found: v.cols() });
    }
    if u.cols() == 0 {
        return Err(Error::InvalidSubspace);
    }
    check_orthonormal(u)?;
    check_orthonormal(v)?;

    let m = u.transpose_matmul(v)?;
    let mtm = SymMatrix::new(m.transpose_matmul(&m)?, MatrixKind::Generic)?;
    let es = sym_eigendecompose(&mtm)?;
    let sigma_min2 = es.values()[es.dim() - 1];
    Ok(libm::sqrt((1.0 - sigma_min2).clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::principal_subspace;

    fn col(v: &[f64]) -> Matrix {
        Matrix::from_vec(v.len(), 1, v.to_vec()).unwrap()
    }

    #[test]
    fn identical_subspaces() {
        let u = col(&[0.6, 0.8]);
        assert_eq!(subspace_sin_theta(&u, &u).unwrap(), 0.0);
    }

    #[test]
    fn forty_five_degrees() {
        let r2 = core::f64::consts::FRAC_1_SQRT_2;
        let s = subspace_sin_theta(&col(&[1.0, 0.0]), &col(&[r2, r2])).unwrap();
        assert!((s - r2).abs() < 1e-12);
    }

    #[test]
    fn eigengap_family_closed_form() {
        let eps: f64 = 0.5;
        let q = SymMatrix::from_rows(&[[3.0, eps], [eps, 1.0]], MatrixKind::Covariance).unwrap();
        let v = principal_subspace(&sym_eigendecompose(&q).unwrap(), 1).unwrap();
        let got = subspace_sin_theta(&col(&[1.0, 0.0]), &v).unwrap();
        let root = libm::sqrt(1.0 + eps * eps);
        let closed = eps.abs() / libm::sqrt((1.0 + root) * (1.0 + root) + eps * eps);
        assert!((got - closed).abs() < 1e-12);
        assert!((closed - 0.229_753_0).abs() < 1e-6);
    }

    #[test]
    fn shape_and_orthonormality_errors() {
        let u = col(&[1.0, 0.0]);
        let v = col(&[1.0, 0.0, 0.0]);
        assert!(matches!(subspace_sin_theta(&u, &v), Err(Error::ShapeMismatch { .. })));
        let bad = col(&[1.0, 1.0]);
        assert_eq!(subspace_sin_theta(&u, &bad).unwrap_err(), Error::InvalidSubspace);
    }

    #[test]
    fn orthogonal_planes_in_four_dims() {
        let u = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, 0.0]]).unwrap();
        let v = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]).unwrap();
        // Shares e1, but e2 ⟂ span(e1, e3): largest angle is 90°.
        assert!((subspace_sin_theta(&u, &v).unwrap() - 1.0).abs() < 1e-12);
    }
}
