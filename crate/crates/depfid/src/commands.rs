//! Scenario generation, the eigengap sweep and the joint-tail table.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use depfid_core::diagnostics::{davis_kahan_bound, joint_tail_probability};
use depfid_core::linalg::{
    eigengap_of, estimate_covariance, principal_subspace, subspace_sin_theta, sym_eigendecompose,
};
use depfid_core::scenarios::{eigengap_sin_theta, sample_gaussian_copula, sample_mvn, sample_t_copula, ScenarioSpec};
use depfid_core::{CovarianceMode, DataMatrix, Error, SymMatrix};
use serde::Serialize;

use crate::csv_io::{write_csv, write_text};
use crate::error::{DepfidError, Result};

/// Inclusive arithmetic grid written `START:STOP:STEP`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    /// Points `start + k·step` up to `stop`, snapped to 12 decimals so that
    /// `0:0.1:1` yields `0.3` rather than `0.30000000000000004`.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12).collect()
    }
}

impl FromStr for Grid {
    type Err = DepfidError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || DepfidError::InvalidArgument(format!("grid `{s}` must be START:STOP:STEP with STEP > 0"));
        let parts: Vec<f64> =
            s.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start && step.is_finite()) {
            return Err(bad());
        }
        Ok(Grid { start, stop, step })
    }
}

#[derive(Serialize)]
struct ClosedFormsJson {
    scenario: &'static str,
    d_sigma: Option<f64>,
    beta_ref: Option<f64>,
    beta_syn: Option<f64>,
    exact_sin_theta: Option<f64>,
}

/// Writes both samples as headerless CSV and returns the closed forms as JSON.
pub fn cmd_synth(spec: &ScenarioSpec, out_ref: &Path, out_syn: &Path) -> Result<String> {
    let pair = spec.generate()?;
    write_csv(out_ref, &pair.samples_ref)?;
    write_csv(out_syn, &pair.samples_syn)?;
    let cf = pair.closed_forms;
    let json = ClosedFormsJson {
        scenario: spec.kind.as_str(),
        d_sigma: cf.d_sigma,
        beta_ref: cf.beta_ref,
        beta_syn: cf.beta_syn,
        exact_sin_theta: cf.exact_sin_theta,
    };
    let mut s = serde_json::to_string_pretty(&json).expect("closed forms serialize");
    s.push('\n');
    Ok(s)
}

fn leading_sin_theta(a: &DataMatrix, b: &DataMatrix) -> Result<f64> {
    let ea = sym_eigendecompose(&estimate_covariance(a, CovarianceMode::Empirical)?)?;
    let eb = sym_eigendecompose(&estimate_covariance(b, CovarianceMode::Empirical)?)?;
    Ok(subspace_sin_theta(&principal_subspace(&ea, 1)?, &principal_subspace(&eb, 1)?)?)
}

/// Eigengap curve: population divergence, bound and exact angle per `ε`,
/// plus the angle between sample covariances.
///
/// Both samples at every grid point reuse the normals of stream `(seed, 0)`,
/// so the sample column isolates the effect of `ε` from sampling noise and
/// is exactly 0 at `ε = 0`.
pub fn sweep_table(grid: &Grid, n: usize, seed: u64) -> Result<String> {
    let cov_ref = SymMatrix::covariance(&[[3.0, 0.0], [0.0, 1.0]])?;
    let gap = eigengap_of(&[3.0, 1.0], 1)?;
    let sample_ref = sample_mvn(&[0.0, 0.0], &cov_ref, n, seed)?;
    let mut out = String::from("epsilon,d_sigma,dk_bound,vacuous,exact_sin_theta,sample_sin_theta\n");
    for eps in grid.points() {
        if eps < 0.0 {
            return Err(DepfidError::InvalidArgument("epsilon must be nonnegative".into()));
        }
        if eps * eps >= 3.0 {
            return Err(Error::NotPositiveDefinite { pivot: 1 }.into());
        }
        let cov_syn = SymMatrix::covariance(&[[3.0, eps], [eps, 1.0]])?;
        let d_sigma = std::f64::consts::SQRT_2 * eps;
        let dk = davis_kahan_bound(d_sigma, gap);
        let sample = leading_sin_theta(&sample_ref, &sample_mvn(&[0.0, 0.0], &cov_syn, n, seed)?)?;
        let _ = writeln!(out, "{eps},{d_sigma},{},{},{},{sample}", dk.value, dk.vacuous, eigengap_sin_theta(eps));
    }
    Ok(out)
}

pub fn cmd_sweep(grid: &Grid, n: usize, seed: u64, out: &Path) -> Result<()> {
    write_text(out, &sweep_table(grid, n, seed)?)
}

fn ratio_cell(num: f64, den: f64) -> String {
    if den > 0.0 {
        format!("{}", num / den)
    } else if num > 0.0 {
        "inf".into()
    } else {
        "nan".into()
    }
}

/// Joint exceedance `P(X₁ > u, X₂ > u)` under Gaussian and t copulas with
/// standard-normal marginals, one row per `u`.
pub fn tail_table(rho: f64, nu: f64, grid: &Grid, n: usize, seed: u64) -> Result<String> {
    let g = sample_gaussian_copula(rho, n, seed)?;
    let t = sample_t_copula(rho, nu, n, seed)?;
    let mut out = String::from("u,p_gaussian,p_tcopula,ratio\n");
    for u in grid.points() {
        let pg = joint_tail_probability(&g, 0, 1, u)?;
        let pt = joint_tail_probability(&t, 0, 1, u)?;
        let _ = writeln!(out, "{u},{pg},{pt},{}", ratio_cell(pt, pg));
    }
    Ok(out)
}

pub fn cmd_tail(rho: f64, nu: f64, grid: &Grid, n: usize, seed: u64, out: &Path) -> Result<()> {
    write_text(out, &tail_table(rho, nu, grid, n, seed)?)
}
