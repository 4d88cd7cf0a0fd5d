//! Projection of both datasets onto the reference's leading principal axes.

use depfid_core::linalg::{estimate_covariance, principal_subspace, sym_eigendecompose};
use depfid_core::{CovarianceMode, DataMatrix, Error, Matrix};

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct PcaProjection {
    pub ref_proj: DataMatrix,
    pub syn_proj: DataMatrix,
    /// Share of the reference's total variance on the retained axes.
    pub variance_explained: f64,
}

fn project(data: &DataMatrix, means: &[f64], basis: &Matrix) -> Result<DataMatrix> {
    let mut centered = data.values().clone();
    for i in 0..centered.rows() {
        for (v, m) in centered.row_mut(i).iter_mut().zip(means) {
            *v -= m;
        }
    }
    Ok(DataMatrix::new(centered.matmul(basis)?)?)
}

/// Centers both datasets by the reference column means and projects them on
/// the top-`p` eigenvectors of the reference covariance.
pub fn pca_project(reference: &DataMatrix, synthetic: &DataMatrix, p: usize) -> Result<PcaProjection> {
    let d = reference.d();
    if synthetic.d() != d {
        return Err(Error::ShapeMismatch { expected: d, found: synthetic.d() }.into());
    }
    if p == 0 || p > d {
        return Err(Error::IndexOutOfRange { index: p, limit: d }.into());
    }
    let es = sym_eigendecompose(&estimate_covariance(reference, CovarianceMode::Empirical)?)?;
    let total: f64 = es.values().iter().map(|v| v.max(0.0)).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateInput("reference data has zero total variance").into());
    }
    let kept: f64 = es.values()[..p].iter().map(|v| v.max(0.0)).sum();
    let basis = principal_subspace(&es, p)?;
    let means = reference.column_means();
    Ok(PcaProjection {
        ref_proj: project(reference, &means, &basis)?,
        syn_proj: project(synthetic, &means, &basis)?,
        variance_explained: (kept / total).clamp(0.0, 1.0),
    })
}
