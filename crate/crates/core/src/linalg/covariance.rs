use alloc::vec::Vec;

use super::matrix::{DataMatrix, Matrix, MatrixKind, SymMatrix};
use crate::error::{Error, Result};

/// Covariance estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovarianceMode {
    /// Unbiased sample covariance, denominator `n - 1`.
    #[default]
    Empirical,
    /// Ledoit–Wolf shrinkage of the empirical covariance toward `μI`.
    LedoitWolf,
}

fn centered(data: &DataMatrix) -> Matrix {
    let means = data.column_means();
    let mut x = data.values().clone();
    for i in 0..x.rows() {
        for (v, m) in x.row_mut(i).iter_mut().zip(&means) {
            *v -= m;
        }
    }
    x
}

pub fn estimate_covariance(data: &DataMatrix, mode: CovarianceMode) -> Result<SymMatrix> {
    if data.n() < 2 {
        return Err(Error::InsufficientSamples { required: 2, got: data.n() });
    }
    let x = centered(data);
    let mut cov = x.transpose_matmul(&x)?.scale(1.0 / (data.n() as f64 - 1.0));
    if mode == CovarianceMode::LedoitWolf {
        cov = ledoit_wolf(&x, cov);
    }
    SymMatrix::new(cov, MatrixKind::Covariance)
}

// Shrinks `s` toward `tr(s)/d · I` with the Ledoit–Wolf (2004) intensity.
// `x` holds the centered observations.
fn ledoit_wolf(x: &Matrix, s: Matrix) -> Matrix {
    let n = x.rows();
    let d = s.rows();
    let df = d as f64;
    let mu = (0..d).map(|i| s[(i, i)]).sum::<f64>() / df;

    let mut delta2 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { mu } else { 0.0 };
            let diff = s[(i, j)] - target;
            delta2 += diff * diff;
        }
    }
    delta2 /= df;
    if delta2 <= 0.0 {
        return s;
    }

    // ‖x xᵀ − S‖²_F = ‖x‖⁴ − 2 xᵀ S x + ‖S‖²_F
    let s_norm2: f64 = s.as_slice().iter().map(|v| v * v).sum();
    let mut beta_bar2 = 0.0;
    let mut sx: Vec<f64> = alloc::vec![0.0; d];
    for k in 0..n {
        let row = x.row(k);
        let norm2: f64 = row.iter().map(|v| v * v).sum();
        for (i, out) in sx.iter_mut().enumerate() {
            *out = s.row(i).iter().zip(row).map(|(a, b)| a * b).sum();
        }
        let quad: f64 = sx.iter().zip(row).map(|(a, b)| a * b).sum();
        beta_bar2 += norm2 * norm2 - 2.0 * quad + s_norm2;
    }
    beta_bar2 /= (n as f64) * (n as f64) * df;

    let beta2 = beta_bar2.min(delta2);
    let shrinkage = beta2 / delta2;
    let mut out = s.scale(1.0 - shrinkage);
    for i in 0..d {
        out[(i, i)] += shrinkage * mu;
    }
    out
}

/// Entry `(i, j)` becomes `cov_ij / sqrt(cov_ii cov_jj)`.
pub fn covariance_to_correlation(cov: &SymMatrix) -> Result<SymMatrix> {
    let d = cov.dim();
    let diag = cov.diagonal();
    if let Some(i) = diag.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::DegenerateVariance { index: i });
    }
    let sd: Vec<f64> = diag.iter().map(|v| libm::sqrt(*v)).collect();
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = if i == j { 1.0 } else { (cov.get(i, j) / (sd[i] * sd[j])).clamp(-1.0, 1.0) };
        }
    }
    SymMatrix::new(m, MatrixKind::Correlation)
}

pub fn frobenius_norm(a: &SymMatrix) -> f64 {
    a.entries().frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sym(rows: &[&[f64]]) -> SymMatrix {
        SymMatrix::covariance(rows).unwrap()
    }

    #[test]
    fn two_point_sample() {
        let data = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let cov = estimate_covariance(&data, CovarianceMode::Empirical).unwrap();
        assert_eq!(cov.entries().as_slice(), &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(cov.kind(), MatrixKind::Covariance);
    }

    #[test]
    fn identical_rows_give_zero_covariance() {
        let data = DataMatrix::from_rows(&[[2.5, -1.0, 3.0]; 4]).unwrap();
        let cov = estimate_covariance(&data, CovarianceMode::Empirical).unwrap();
        assert!(cov.entries().as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn five_rows_match_direct_summation() {
        let rows = [[1.0, 2.0, -0.5], [0.3, -1.2, 4.0], [2.2, 0.7, 1.1], [-1.5, 3.3, 0.0], [0.9, 0.1, -2.6]];
        let data = DataMatrix::from_rows(&rows).unwrap();
        let cov = estimate_covariance(&data, CovarianceMode::Empirical).unwrap();
        // Oracle: Σ = 1/(n-1) Σ_k (x_k - x̄)(x_k - x̄)ᵀ, one entry at a time.
        let mean: Vec<f64> = (0..3).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / 5.0).collect();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for r in &rows {
                    s += (r[i] - mean[i]) * (r[j] - mean[j]);
                }
                let expected = s / 4.0;
                assert!((cov.get(i, j) - expected).abs() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn single_row_is_rejected() {
        let err = DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap_err();
        assert_eq!(err, Error::InsufficientSamples { required: 2, got: 1 });
    }

    #[test]
    fn nan_is_rejected_with_coordinates() {
        let err = DataMatrix::from_rows(&[[1.0, 2.0], [3.0, f64::NAN]]).unwrap_err();
        assert_eq!(err, Error::InvalidData { row: 1, col: 1 });
    }

    #[test]
    fn correlation_examples() {
        let c = covariance_to_correlation(&sym(&[&[4.0, 2.0], &[2.0, 1.0]])).unwrap();
        assert_eq!(c.entries().as_slice(), &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(c.kind(), MatrixKind::Correlation);

        let c = covariance_to_correlation(&SymMatrix::identity(3)).unwrap();
        assert_eq!(c.entries(), &Matrix::identity(3));

        let c = covariance_to_correlation(&sym(&[&[2.0, 0.6], &[0.6, 0.5]])).unwrap();
        assert!((c.get(0, 1) - 0.6).abs() < 1e-15);
        assert!((c.get(1, 0) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn correlation_rejects_zero_variance() {
        let err = covariance_to_correlation(&sym(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap_err();
        assert_eq!(err, Error::DegenerateVariance { index: 1 });
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_norm(&sym(&[&[0.0, 0.0], &[0.0, 0.0]])), 0.0);
        let rho = 0.5;
        let m = SymMatrix::from_rows(&[[0.0, 2.0 * rho], [2.0 * rho, 0.0]], MatrixKind::Generic).unwrap();
        assert!((frobenius_norm(&m) - 2.0 * core::f64::consts::SQRT_2 * rho).abs() < 1e-15);
        let m = sym(&[&[1.0, 2.0], &[2.0, 3.0]]);
        assert!((frobenius_norm(&m) - libm::sqrt(18.0)).abs() < 1e-15);
    }

    #[test]
    fn ledoit_wolf_shrinks_toward_scaled_identity() {
        let rows = vec![
            [1.0, 0.9, 0.2],
            [2.0, 2.1, -0.3],
            [0.5, 0.4, 0.8],
            [-1.0, -0.8, 0.1],
            [0.2, 0.3, -1.1],
            [1.4, 1.2, 0.6],
        ];
        let data = DataMatrix::from_rows(&rows).unwrap();
        let s = estimate_covariance(&data, CovarianceMode::Empirical).unwrap();
        let lw = estimate_covariance(&data, CovarianceMode::LedoitWolf).unwrap();
        // Same trace, off-diagonals shrunk by a common factor in [0, 1].
        assert!((s.trace() - lw.trace()).abs() < 1e-12);
        let factor = lw.get(0, 1) / s.get(0, 1);
        assert!((0.0..=1.0).contains(&factor));
        assert!((lw.get(0, 2) - factor * s.get(0, 2)).abs() < 1e-12);
    }
}
