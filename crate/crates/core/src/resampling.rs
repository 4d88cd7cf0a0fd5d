//! Bootstrap intervals for `D_Σ`, subset sensitivity of `D_Σ` against
//! `1 − RV`, and Spearman rank correlation.
//!
//! Replicate `b` (or subset `k`) draws from its own stream `(seed, b)`, so
//! results do not depend on the order in which replicates are evaluated.

use alloc::vec::Vec;

use crate::diagnostics::{d_sigma, rv_coefficient};
use crate::error::{Error, Result};
use crate::linalg::{estimate_covariance, CovarianceMode, DataMatrix, SymMatrix};
use crate::marginals::ks_two_sample;
use crate::rng::StreamRng;
use crate::special::student_t_two_sided;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSummary {
    pub observed: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub standard_error: f64,
    pub n_resamples: usize,
    pub seed: u64,
    /// Replicate values in replicate order.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpearmanResult {
    pub r: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityResult {
    pub subset_size: usize,
    pub n_subsets: usize,
    pub d_sigma_values: Vec<f64>,
    pub one_minus_rv_values: Vec<f64>,
    /// `None` when either metric is constant across subsets (e.g. identical inputs).
    pub spearman_r: Option<f64>,
    pub spearman_p: Option<f64>,
    /// KS p-value between the two z-scored metric lists.
    pub ks_p: Option<f64>,
}

/// Linear interpolation between order statistics (`h = (B − 1) q`).
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

fn resample(data: &DataMatrix, rng: &mut StreamRng) -> Result<DataMatrix> {
    let n = data.n();
    let rows: Vec<usize> = (0..n).map(|_| rng.index(n)).collect();
    data.select_rows(&rows)
}

/// Percentile bootstrap for `D_Σ`, resampling rows of both datasets.
pub fn bootstrap_d_sigma(
    reference: &DataMatrix,
    synthetic: &DataMatrix,
    n_resamples: usize,
    seed: u64,
    mode: CovarianceMode,
) -> Result<BootstrapSummary> {
    if n_resamples == 0 {
        return Err(Error::InvalidParameter("bootstrap needs at least one resample"));
    }
    if reference.d() != synthetic.d() {
        return Err(Error::ShapeMismatch { expected: reference.d(), found: synthetic.d() });
    }
    let observed = d_sigma(&estimate_covariance(reference, mode)?, &estimate_covariance(synthetic, mode)?)?;
    let values = (0..n_resamples)
        .map(|b| {
            let mut rng = StreamRng::new(seed, b as u64);
            let r = resample(reference, &mut rng)?;
            let s = resample(synthetic, &mut rng)?;
            d_sigma(&estimate_covariance(&r, mode)?, &estimate_covariance(&s, mode)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let (_, standard_error) = mean_and_sd(&values);
    Ok(BootstrapSummary {
        observed,
        ci_low: percentile_sorted(&sorted, 0.025),
        ci_high: percentile_sorted(&sorted, 0.975),
        standard_error,
        n_resamples,
        seed,
        values,
    })
}

/// Average ranks (1-based), ties share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = 0.5 * ((start + 1) + end) as f64;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let (ma, _) = mean_and_sd(a);
    let (mb, _) = mean_and_sd(b);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::DegenerateInput("constant sequence has no rank correlation"));
    }
    Ok((sab / libm::sqrt(saa * sbb)).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with a two-sided t-approximation p-value.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<SpearmanResult> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch { expected: a.len(), found: b.len() });
    }
    if a.len() < 3 {
        return Err(Error::InsufficientSamples { required: 3, got: a.len() });
    }
    let r = pearson(&average_ranks(a), &average_ranks(b))?;
    let df = (a.len() - 2) as f64;
    let p = if r.abs() >= 1.0 {
        0.0
    } else {
        let t = r * libm::sqrt(df / (1.0 - r * r));
        student_t_two_sided(t, df)
    };
    Ok(SpearmanResult { r, p })
}

fn standardized(values: &[f64]) -> Option<Vec<f64>> {
    let (mean, sd) = mean_and_sd(values);
    if !(sd > 0.0) {
        return None;
    }
    Some(values.iter().map(|v| (v - mean) / sd).collect())
}

fn is_constant(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// `D_Σ` and `1 − RV` over random column subsets, then their Spearman
/// correlation and a KS comparison of the z-scored lists.
pub fn subset_sensitivity(
    reference: &DataMatrix,
    synthetic: &DataMatrix,
    subset_size: usize,
    n_subsets: usize,
    seed: u64,
    mode: CovarianceMode,
) -> Result<SensitivityResult> {
    let d = reference.d();
    if synthetic.d() != d {
        return Err(Error::ShapeMismatch { expected: d, found: synthetic.d() });
    }
    if subset_size == 0 || subset_size > d {
        return Err(Error::IndexOutOfRange { index: subset_size, limit: d });
    }
    if n_subsets < 3 {
        return Err(Error::InvalidParameter("subset sensitivity needs at least 3 subsets"));
    }
    // Empirical covariance restricts exactly to principal submatrices.
    let full = match mode {
        CovarianceMode::Empirical => {
            Some((estimate_covariance(reference, mode)?, estimate_covariance(synthetic, mode)?))
        }
        CovarianceMode::LedoitWolf => None,
    };
    let subset_covs = |cols: &[usize]| -> Result<(SymMatrix, SymMatrix)> {
        match &full {
            Some((a, b)) => Ok((a.submatrix(cols)?, b.submatrix(cols)?)),
            None => Ok((
                estimate_covariance(&reference.select_columns(cols)?, mode)?,
                estimate_covariance(&synthetic.select_columns(cols)?, mode)?,
            )),
        }
    };

    let mut d_sigma_values = Vec::with_capacity(n_subsets);
    let mut one_minus_rv_values = Vec::with_capacity(n_subsets);
    for k in 0..n_subsets {
        let mut rng = StreamRng::new(seed, k as u64);
        let mut cols = rng.choose_distinct(d, subset_size);
        cols.sort_unstable();
        let (a, b) = subset_covs(&cols)?;
        d_sigma_values.push(d_sigma(&a, &b)?);
        one_minus_rv_values.push(1.0 - rv_coefficient(&a, &b)?);
    }

    let degenerate = is_constant(&d_sigma_values) || is_constant(&one_minus_rv_values);
    let (spearman_r, spearman_p) = if degenerate {
        (None, None)
    } else {
        let s = spearman(&d_sigma_values, &one_minus_rv_values)?;
        (Some(s.r), Some(s.p))
    };
    let ks_p = match (standardized(&d_sigma_values), standardized(&one_minus_rv_values)) {
        (Some(za), Some(zb)) if !degenerate => Some(ks_two_sample(&za, &zb)?.p_value),
        _ => None,
    };
    Ok(SensitivityResult { subset_size, n_subsets, d_sigma_values, one_minus_rv_values, spearman_r, spearman_p, ks_p })
}
