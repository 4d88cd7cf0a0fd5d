//! Covariance-level and downstream-stability diagnostics.
//!
//! `D_Σ = ‖Σ_ref − Σ_syn‖_F` is the headline divergence; its ratio to the
//! reference eigengap decides whether principal subspaces are stable
//! (`D_Σ/δ < 1`). Slopes, Weyl deltas and Davis–Kahan bounds translate the
//! divergence into downstream quantities.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{covariance_to_correlation, leading_eigengap, sym_eigendecompose, DataMatrix, SymMatrix};

/// Slopes whose magnitude is at or below this never count as sign flips.
pub const SLOPE_TOLERANCE: f64 = 1e-6;
/// Relative predictor-variance mismatch above which the slope bound is withheld.
pub const VARIANCE_MATCH_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Stable,
    Unstable,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Stable => "stable",
            Regime::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub d_sigma: f64,
    pub d_sigma_normalized: f64,
    pub eigengap: f64,
    /// `d_sigma / eigengap`, `+∞` when the eigengap is zero.
    pub ratio: f64,
    pub regime: Regime,
}

/// Davis–Kahan bound `2 D_Σ / γ` with its informativeness flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DavisKahanBound {
    pub value: f64,
    /// Set when the eigengap is zero or the bound is `>= 1`.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeComparison {
    pub target_index: usize,
    pub predictor_indices: Vec<usize>,
    pub slopes_ref: Vec<f64>,
    pub slopes_syn: Vec<f64>,
    pub sign_flips: usize,
    /// `D_Σ / (√2 σ_X²)`; `None` when predictor variances do not match.
    pub slope_bound: Option<f64>,
}

impl SlopeComparison {
    /// `|β_ref − β_syn|` per predictor.
    pub fn abs_deltas(&self) -> Vec<f64> {
        self.slopes_ref.iter().zip(&self.slopes_syn).map(|(a, b)| (a - b).abs()).collect()
    }

    pub fn max_abs_delta(&self) -> f64 {
        self.abs_deltas().into_iter().fold(0.0, f64::max)
    }
}

fn check_same_dim(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::ShapeMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// `‖Σ_ref − Σ_syn‖_F`.
pub fn d_sigma(cov_ref: &SymMatrix, cov_syn: &SymMatrix) -> Result<f64> {
    check_same_dim(cov_ref, cov_syn)?;
    Ok(cov_ref.entries().sub(cov_syn.entries())?.frobenius_norm())
}

/// Frobenius distance between the induced correlation matrices.
pub fn d_sigma_normalized(cov_ref: &SymMatrix, cov_syn: &SymMatrix) -> Result<f64> {
    check_same_dim(cov_ref, cov_syn)?;
    let c_ref = covariance_to_correlation(cov_ref)?;
    let c_syn = covariance_to_correlation(cov_syn)?;
    Ok(c_ref.entries().sub(c_syn.entries())?.frobenius_norm())
}

pub fn stability_verdict(cov_ref: &SymMatrix, cov_syn: &SymMatrix, r: usize) -> Result<StabilityVerdict> {
    let divergence = d_sigma(cov_ref, cov_syn)?;
    let normalized = d_sigma_normalized(cov_ref, cov_syn)?;
    let eigengap = leading_eigengap(&sym_eigendecompose(cov_ref)?, r)?;
    Ok(verdict_from_parts(divergence, normalized, eigengap))
}

/// Ratio and regime from precomputed parts. A ratio of exactly 1 is unstable.
pub fn verdict_from_parts(d_sigma: f64, d_sigma_normalized: f64, eigengap: f64) -> StabilityVerdict {
    let ratio = if eigengap > 0.0 { d_sigma / eigengap } else { f64::INFINITY };
    let regime = if ratio < 1.0 { Regime::Stable } else { Regime::Unstable };
    StabilityVerdict { d_sigma, d_sigma_normalized, eigengap, ratio, regime }
}

/// `|λ_k(ref) − λ_k(syn)|` for each `k`, both spectra descending.
pub fn weyl_deltas(cov_ref: &SymMatrix, cov_syn: &SymMatrix) -> Result<Vec<f64>> {
    check_same_dim(cov_ref, cov_syn)?;
    let a = sym_eigendecompose(cov_ref)?;
    let b = sym_eigendecompose(cov_syn)?;
    Ok(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).collect())
}

pub fn davis_kahan_bound(d_sigma: f64, eigengap: f64) -> DavisKahanBound {
    if !(eigengap > 0.0) {
        return DavisKahanBound { value: f64::INFINITY, vacuous: true };
    }
    let value = 2.0 * d_sigma / eigengap;
    DavisKahanBound { value, vacuous: value >= 1.0 }
}

/// `tr(Σ_ref Σ_syn) / (‖Σ_ref‖_F ‖Σ_syn‖_F)`.
pub fn rv_coefficient(cov_ref: &SymMatrix, cov_syn: &SymMatrix) -> Result<f64> {
    check_same_dim(cov_ref, cov_syn)?;
    let na = cov_ref.entries().frobenius_norm();
    let nb = cov_syn.entries().frobenius_norm();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::DegenerateInput("RV coefficient of a zero matrix"));
    }
    // tr(AB) = Σ_ij a_ij b_ji = Σ_ij a_ij b_ij for symmetric inputs.
    let trace: f64 = cov_ref.entries().as_slice().iter().zip(cov_syn.entries().as_slice()).map(|(a, b)| a * b).sum();
    Ok((trace / (na * nb)).clamp(-1.0, 1.0))
}

fn check_slope_indices(d: usize, target: usize, predictors: &[usize]) -> Result<()> {
    if target >= d {
        return Err(Error::IndexOutOfRange { index: target, limit: d });
    }
    for &j in predictors {
        if j >= d {
            return Err(Error::IndexOutOfRange { index: j, limit: d });
        }
        if j == target {
            return Err(Error::InvalidParameter("target column listed among predictors"));
        }
    }
    Ok(())
}

/// Simple-regression slopes `Cov(X_target, X_j) / Var(X_j)` on centered columns.
pub fn pairwise_slopes(data: &DataMatrix, target: usize, predictors: &[usize]) -> Result<Vec<f64>> {
    check_slope_indices(data.d(), target, predictors)?;
    let means = data.column_means();
    let n = data.n();
    let mut out = Vec::with_capacity(predictors.len());
    for &j in predictors {
        let (mut cov, mut var) = (0.0, 0.0);
        for i in 0..n {
            let row = data.row(i);
            let xj = row[j] - means[j];
            cov += (row[target] - means[target]) * xj;
            var += xj * xj;
        }
        let denom = n as f64 - 1.0;
        let (cov, var) = (cov / denom, var / denom);
        if var <= 1e-12 {
            return Err(Error::DegenerateVariance { index: j });
        }
        out.push(cov / var);
    }
    Ok(out)
}

/// Population slopes `Σ_tj / Σ_jj` read from a covariance matrix.
pub fn population_slopes(cov: &SymMatrix, target: usize, predictors: &[usize]) -> Result<Vec<f64>> {
    check_slope_indices(cov.dim(), target, predictors)?;
    predictors
        .iter()
        .map(|&j| {
            let var = cov.get(j, j);
            if var <= 1e-12 {
                Err(Error::DegenerateVariance { index: j })
            } else {
                Ok(cov.get(target, j) / var)
            }
        })
        .collect()
}

/// Compares reference and synthetic slopes and attaches the slope bound.
///
/// `var_ref` / `var_syn` are the predictor variances under each side. The
/// bound uses the smallest reference variance, which makes it hold for every
/// predictor at once, and is withheld when any predictor's variances differ
/// by more than 5% relative.
pub fn slope_instability(
    target: usize,
    predictors: &[usize],
    slopes_ref: &[f64],
    slopes_syn: &[f64],
    var_ref: &[f64],
    var_syn: &[f64],
    d_sigma: f64,
) -> Result<SlopeComparison> {
    let k = predictors.len();
    for len in [slopes_ref.len(), slopes_syn.len(), var_ref.len(), var_syn.len()] {
        if len != k {
            return Err(Error::ShapeMismatch { expected: k, found: len });
        }
    }
    let sign_flips = slopes_ref
        .iter()
        .zip(slopes_syn)
        .filter(|(a, b)| a.abs() > SLOPE_TOLERANCE && b.abs() > SLOPE_TOLERANCE && **a * **b < 0.0)
        .count();
    let matched = var_ref.iter().zip(var_syn).all(|(a, b)| {
        let scale = a.abs().max(b.abs());
        scale > 0.0 && (a - b).abs() / scale <= VARIANCE_MATCH_TOLERANCE
    });
    let min_var = var_ref.iter().copied().fold(f64::INFINITY, f64::min);
    let slope_bound =
        if matched && min_var.is_finite() && min_var > 0.0 { Some(d_sigma / (SQRT_2 * min_var)) } else { None };
    Ok(SlopeComparison {
        target_index: target,
        predictor_indices: predictors.to_vec(),
        slopes_ref: slopes_ref.to_vec(),
        slopes_syn: slopes_syn.to_vec(),
        sign_flips,
        slope_bound,
    })
}

/// Fraction of rows with both `x_i > u` and `x_j > u`.
pub fn joint_tail_probability(data: &DataMatrix, i: usize, j: usize, u: f64) -> Result<f64> {
    let d = data.d();
    for idx in [i, j] {
        if idx >= d {
            return Err(Error::IndexOutOfRange { index: idx, limit: d });
        }
    }
    let hits = (0..data.n()).filter(|&k| {
        let row = data.row(k);
        row[i] > u && row[j] > u
    });
    Ok(hits.count() as f64 / data.n() as f64)
}
