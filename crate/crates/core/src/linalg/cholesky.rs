use super::matrix::{Matrix, SymMatrix};
use crate::error::{Error, Result};

const MIN_PIVOT: f64 = 1e-14;

/// Lower-triangular `L` with `L Lᵀ = A`.
///
/// Fails with `NotPositiveDefinite` when a pivot drops to `1e-14` or below.
pub fn cholesky_factor(a: &SymMatrix) -> Result<Matrix> {
    let d = a.dim();
    let m = a.entries();
    let mut l = Matrix::zeros(d, d);
    for j in 0..d {
        let mut pivot = m[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > MIN_PIVOT) {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = libm::sqrt(pivot);
        l[(j, j)] = ljj;
        for i in (j + 1)..d {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}
