//! Covariance-level dependence fidelity diagnostics.
//!
//! This crate holds the numerical core: dense symmetric linear algebra,
//! covariance divergence and subspace stability diagnostics, marginal
//! Kolmogorov–Smirnov profiles, Gaussian-kernel MMD, bootstrap and subset
//! resampling, and samplers for the closed-form reference/synthetic pairs.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! report emission live in the `depfid` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod marginals;
pub mod resampling;
pub mod rng;
pub mod scenarios;
pub mod special;

pub use error::{Error, Result};
pub use linalg::{CovarianceMode, DataMatrix, EigenSystem, Matrix, MatrixKind, SymMatrix};
