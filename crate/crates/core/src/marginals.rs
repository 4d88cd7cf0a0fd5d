//! Per-dimension two-sample Kolmogorov–Smirnov diagnostics.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::DataMatrix;
use crate::special::kolmogorov_survival;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsProfile {
    pub per_dimension: Vec<KsResult>,
    pub median_statistic: f64,
}

fn sorted_copy(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample KS statistic and asymptotic p-value.
///
/// The statistic is the largest gap between the two empirical CDFs, checked
/// after every distinct value of the merged sample so that ties step both
/// CDFs together. The p-value evaluates the Kolmogorov tail at
/// `(√nₑ + 0.12 + 0.11/√nₑ)·D` with `nₑ = n_a n_b / (n_a + n_b)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientSamples { required: 1, got: 0 });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("KS input contains non-finite values"));
    }
    let (a, b) = (sorted_copy(a), sorted_copy(b));
    let (na, nb) = (a.len(), b.len());
    let (fa, fb) = (na as f64, nb as f64);

    let (mut i, mut j) = (0, 0);
    let mut statistic = 0.0_f64;
    while i < na && j < nb {
        let v = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < na && a[i] == v {
            i += 1;
        }
        while j < nb && b[j] == v {
            j += 1;
        }
        statistic = statistic.max((i as f64 / fa - j as f64 / fb).abs());
    }
    // Once one sample is exhausted its CDF is 1 and the other only climbs toward 1,
    // so the remaining gaps are no larger than the current one.

    let ne = fa * fb / (fa + fb);
    let root = libm::sqrt(ne);
    let lambda = (root + 0.12 + 0.11 / root) * statistic;
    Ok(KsResult { statistic, p_value: kolmogorov_survival(lambda) })
}

/// Median with the even-length convention of averaging the central pair.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let v = sorted_copy(values);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn ks_profile(reference: &DataMatrix, synthetic: &DataMatrix) -> Result<KsProfile> {
    if reference.d() != synthetic.d() {
        return Err(Error::ShapeMismatch { expected: reference.d(), found: synthetic.d() });
    }
    let per_dimension = (0..reference.d())
        .map(|j| ks_two_sample(&reference.column(j), &synthetic.column(j)))
        .collect::<Result<Vec<_>>>()?;
    let stats: Vec<f64> = per_dimension.iter().map(|r| r.statistic).collect();
    Ok(KsProfile { median_statistic: median(&stats), per_dimension })
}
