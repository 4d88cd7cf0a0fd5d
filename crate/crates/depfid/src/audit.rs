//! Assembly of every requested diagnostic into one [`AuditReport`].

use depfid_core::diagnostics::{
    d_sigma, d_sigma_normalized, davis_kahan_bound, pairwise_slopes, rv_coefficient, slope_instability,
    verdict_from_parts, DavisKahanBound, SlopeComparison, StabilityVerdict,
};
use depfid_core::kernel::{copula_mmd, median_heuristic_bandwidth, mmd_unbiased, MmdResult};
use depfid_core::linalg::{
    eigengap_of, estimate_covariance, principal_subspace, subspace_sin_theta, sym_eigendecompose,
};
use depfid_core::marginals::{ks_profile, KsProfile};
use depfid_core::resampling::{bootstrap_d_sigma, subset_sensitivity, BootstrapSummary, SensitivityResult};
use depfid_core::{CovarianceMode, DataMatrix, Error};

use crate::error::{DepfidError, Result};
use crate::pca::pca_project;

pub const DEFAULT_SUBSPACE_DIMS: [usize; 5] = [1, 2, 3, 5, 10];
pub const DEFAULT_BOOTSTRAP: usize = 500;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetOptions {
    pub count: usize,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditOptions {
    pub pca_dims: Option<usize>,
    /// Values `>= d` are dropped.
    pub subspace_dims: Vec<usize>,
    /// `None` or `Some(0)` skips the bootstrap.
    pub bootstrap: Option<usize>,
    pub subsets: Option<SubsetOptions>,
    pub mmd: bool,
    pub copula_mmd: bool,
    pub slope_target: usize,
    /// Defaults to columns `1..=min(9, d − 1)` (skipping the target).
    pub slope_predictors: Option<Vec<usize>>,
    pub seed: u64,
    pub cov_mode: CovarianceMode,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            pca_dims: None,
            subspace_dims: DEFAULT_SUBSPACE_DIMS.to_vec(),
            bootstrap: Some(DEFAULT_BOOTSTRAP),
            subsets: None,
            mmd: false,
            copula_mmd: false,
            slope_target: 0,
            slope_predictors: None,
            seed: DEFAULT_SEED,
            cov_mode: CovarianceMode::Empirical,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    pub n_ref: usize,
    pub n_syn: usize,
    /// Dimension the diagnostics ran in (after projection).
    pub d: usize,
    pub pca_dims: Option<usize>,
    pub variance_explained: Option<f64>,
    pub cov_mode: CovarianceMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceEntry {
    pub r: usize,
    /// `λ_r − λ_{r+1}` of the reference covariance.
    pub eigengap: f64,
    pub sin_theta: f64,
    pub dk: DavisKahanBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub dataset_meta: DatasetMeta,
    pub verdict: StabilityVerdict,
    pub rv: f64,
    pub ks: KsProfile,
    pub subspace: Vec<SubspaceEntry>,
    pub slopes: SlopeComparison,
    pub bootstrap: Option<BootstrapSummary>,
    pub sensitivity: Option<SensitivityResult>,
    pub mmd: Option<MmdResult>,
    pub copula_mmd: Option<MmdResult>,
    pub seed: u64,
    pub tool_version: &'static str,
}

impl AuditReport {
    pub fn subspace_entry(&self, r: usize) -> Option<&SubspaceEntry> {
        self.subspace.iter().find(|e| e.r == r)
    }
}

fn default_predictors(target: usize, d: usize) -> Vec<usize> {
    (0..d).filter(|&j| j != target).take(9).collect()
}

pub fn run_audit(reference: &DataMatrix, synthetic: &DataMatrix, options: &AuditOptions) -> Result<AuditReport> {
    if reference.d() != synthetic.d() {
        return Err(Error::ShapeMismatch { expected: reference.d(), found: synthetic.d() }.into());
    }
    let (projected, variance_explained) = match options.pca_dims {
        Some(p) => {
            let proj = pca_project(reference, synthetic, p)?;
            (Some((proj.ref_proj, proj.syn_proj)), Some(proj.variance_explained))
        }
        None => (None, None),
    };
    let (x, y) = match &projected {
        Some((a, b)) => (a, b),
        None => (reference, synthetic),
    };
    let d = x.d();
    if d < 2 {
        return Err(DepfidError::InvalidArgument("the audit needs at least two columns".into()));
    }
    let mode = options.cov_mode;
    let cov_ref = estimate_covariance(x, mode)?;
    let cov_syn = estimate_covariance(y, mode)?;
    let es_ref = sym_eigendecompose(&cov_ref)?;
    let es_syn = sym_eigendecompose(&cov_syn)?;

    let divergence = d_sigma(&cov_ref, &cov_syn)?;
    let verdict =
        verdict_from_parts(divergence, d_sigma_normalized(&cov_ref, &cov_syn)?, eigengap_of(es_ref.values(), 1)?);

    if options.subspace_dims.contains(&0) {
        return Err(DepfidError::InvalidArgument("subspace dimensions start at 1".into()));
    }
    let mut dims: Vec<usize> = options.subspace_dims.iter().copied().filter(|&r| r < d).collect();
    dims.sort_unstable();
    dims.dedup();
    let subspace = dims
        .into_iter()
        .map(|r| {
            let eigengap = eigengap_of(es_ref.values(), r)?;
            let sin_theta = subspace_sin_theta(&principal_subspace(&es_ref, r)?, &principal_subspace(&es_syn, r)?)?;
            Ok(SubspaceEntry { r, eigengap, sin_theta, dk: davis_kahan_bound(divergence, eigengap) })
        })
        .collect::<Result<Vec<_>>>()?;

    let target = options.slope_target;
    let predictors = options.slope_predictors.clone().unwrap_or_else(|| default_predictors(target, d));
    if predictors.is_empty() {
        return Err(DepfidError::InvalidArgument("at least one slope predictor is required".into()));
    }
    let slopes_ref = pairwise_slopes(x, target, &predictors)?;
    let slopes_syn = pairwise_slopes(y, target, &predictors)?;
    let var_ref: Vec<f64> = predictors.iter().map(|&j| cov_ref.get(j, j)).collect();
    let var_syn: Vec<f64> = predictors.iter().map(|&j| cov_syn.get(j, j)).collect();
    let slopes = slope_instability(target, &predictors, &slopes_ref, &slopes_syn, &var_ref, &var_syn, divergence)?;

    let bootstrap = match options.bootstrap {
        Some(b) if b > 0 => Some(bootstrap_d_sigma(x, y, b, options.seed, mode)?),
        _ => None,
    };
    let sensitivity =
        options.subsets.map(|s| subset_sensitivity(x, y, s.size, s.count, options.seed, mode)).transpose()?;
    let mmd = if options.mmd {
        let bandwidth = median_heuristic_bandwidth(&x.vstack(y)?, options.seed)?;
        Some(mmd_unbiased(x, y, bandwidth)?)
    } else {
        None
    };
    let copula = if options.copula_mmd { Some(copula_mmd(x, y, options.seed)?) } else { None };

    Ok(AuditReport {
        dataset_meta: DatasetMeta {
            n_ref: x.n(),
            n_syn: y.n(),
            d,
            pca_dims: options.pca_dims,
            variance_explained,
            cov_mode: mode,
        },
        verdict,
        rv: rv_coefficient(&cov_ref, &cov_syn)?,
        ks: ks_profile(x, y)?,
        subspace,
        slopes,
        bootstrap,
        sensitivity,
        mmd,
        copula_mmd: copula,
        seed: options.seed,
        tool_version: env!("CARGO_PKG_VERSION"),
    })
}

/// 0 on success, 2 for an unstable regime when requested, 1 on error.
pub fn exit_code_policy<E>(outcome: &std::result::Result<AuditReport, E>, fail_on_unstable: bool) -> u8 {
    match outcome {
        Err(_) => 1,
        Ok(r) if fail_on_unstable && r.verdict.regime == depfid_core::diagnostics::Regime::Unstable => 2,
        Ok(_) => 0,
    }
}
