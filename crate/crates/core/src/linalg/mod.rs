//! Dense symmetric linear algebra.

mod cholesky;
mod covariance;
mod eigen;
mod matrix;
mod subspace;

pub use cholesky::cholesky_factor;
pub use covariance::{covariance_to_correlation, estimate_covariance, frobenius_norm, CovarianceMode};
pub use eigen::{eigengap_of, leading_eigengap, principal_subspace, sym_eigendecompose, EigenSystem};
pub use matrix::{DataMatrix, Matrix, MatrixKind, SymMatrix};
pub use subspace::subspace_sin_theta;
