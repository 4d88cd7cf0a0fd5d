//! Deterministic samplers for the closed-form constructions: sign-flip
//! pairs, the eigengap family, Gaussian and t copulas with standard-normal
//! marginals, diagonal collapse, and the two Gaussian baseline fitters.
//!
//! Reference samples come from stream 0 and synthetic samples from stream 1
//! of the same seed. [`sample_gaussian_copula`] uses stream 0 and
//! [`sample_t_copula`] stream 1, so both drawn with one seed are independent.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::diagnostics::population_slopes;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_factor, estimate_covariance, CovarianceMode, DataMatrix, Matrix, MatrixKind, SymMatrix};
use crate::rng::StreamRng;
use crate::special::{normal_quantile, student_t_cdf};

const REF_STREAM: u64 = 0;
const SYN_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    SignFlip,
    Eigengap,
    GaussianCopula,
    TCopula,
    DiagonalCollapse,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::SignFlip => "sign-flip",
            ScenarioKind::Eigengap => "eigengap",
            ScenarioKind::GaussianCopula => "gaussian-copula",
            ScenarioKind::TCopula => "t-copula",
            ScenarioKind::DiagonalCollapse => "diagonal-collapse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub rho: f64,
    pub sigma2: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub n: usize,
    pub seed: u64,
    /// Columns beyond the first two are independent N(0, 1) padding
    /// (sign-flip and diagonal-collapse only).
    pub d: usize,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind) -> Self {
        Self { kind, rho: 0.5, sigma2: 1.0, epsilon: 0.5, nu: 3.0, n: 10_000, seed: 42, d: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        let uses_rho = self.kind != ScenarioKind::Eigengap;
        if uses_rho && !(self.rho.abs() < 1.0) {
            return Err(Error::InvalidParameter("rho must lie in (-1, 1)"));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidParameter("sigma2 must be positive"));
        }
        if self.kind == ScenarioKind::Eigengap && !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter("epsilon must be nonnegative"));
        }
        if self.kind == ScenarioKind::TCopula && !(self.nu > 2.0 && self.nu.is_finite()) {
            return Err(Error::InvalidParameter("nu must exceed 2"));
        }
        if self.n < 2 {
            return Err(Error::InsufficientSamples { required: 2, got: self.n });
        }
        let paddable = matches!(self.kind, ScenarioKind::SignFlip | ScenarioKind::DiagonalCollapse);
        if self.d < 2 || (self.d > 2 && !paddable) {
            return Err(Error::InvalidParameter("dimension must be 2 (or more for sign-flip and diagonal-collapse)"));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<ScenarioPair> {
        self.validate()?;
        match self.kind {
            ScenarioKind::SignFlip => make_sign_flip_pair_padded(self.rho, self.sigma2, self.d, self.n, self.seed),
            ScenarioKind::Eigengap => make_eigengap_pair(self.epsilon, self.n, self.seed),
            ScenarioKind::GaussianCopula => make_gaussian_copula_pair(self.rho, self.n, self.seed),
            ScenarioKind::TCopula => make_t_copula_pair(self.rho, self.nu, self.n, self.seed),
            ScenarioKind::DiagonalCollapse => make_diagonal_collapse_pair_padded(self.rho, self.d, self.n, self.seed),
        }
    }
}

/// Population quantities known in closed form; `None` where none exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForms {
    pub d_sigma: Option<f64>,
    /// Population slope of column 0 on column 1.
    pub beta_ref: Option<f64>,
    pub beta_syn: Option<f64>,
    /// `sin` of the angle between the leading population eigenvectors.
    pub exact_sin_theta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScenarioPair {
    pub population_cov_ref: Option<SymMatrix>,
    /// `None` for the t-copula side, whose normal-scores covariance has no closed form.
    pub population_cov_syn: Option<SymMatrix>,
    pub samples_ref: DataMatrix,
    pub samples_syn: DataMatrix,
    pub closed_forms: ClosedForms,
}

#[derive(Debug, Clone)]
pub struct GaussianFit {
    pub mean: Vec<f64>,
    pub cov: SymMatrix,
}

impl GaussianFit {
    pub fn sample(&self, n: usize, seed: u64) -> Result<DataMatrix> {
        sample_mvn(&self.mean, &self.cov, n, seed)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("rho must lie in (-1, 1)"))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InsufficientSamples { required: 2, got: n });
    }
    Ok(())
}

fn sample_mvn_stream(mean: &[f64], cov: &SymMatrix, n: usize, seed: u64, stream: u64) -> Result<DataMatrix> {
    let d = cov.dim();
    if mean.len() != d {
        return Err(Error::ShapeMismatch { expected: d, found: mean.len() });
    }
    check_n(n)?;
    let l = cholesky_factor(cov)?;
    let mut rng = StreamRng::new(seed, stream);
    let mut out = Vec::with_capacity(n * d);
    let mut z = alloc::vec![0.0; d];
    for _ in 0..n {
        z.iter_mut().for_each(|v| *v = rng.standard_normal());
        for (i, m) in mean.iter().enumerate() {
            out.push(m + l.row(i)[..=i].iter().zip(&z).map(|(a, b)| a * b).sum::<f64>());
        }
    }
    DataMatrix::new(Matrix::from_vec(n, d, out)?)
}

/// Rows `mean + L z` with `L` the Cholesky factor of `cov`.
pub fn sample_mvn(mean: &[f64], cov: &SymMatrix, n: usize, seed: u64) -> Result<DataMatrix> {
    sample_mvn_stream(mean, cov, n, seed, REF_STREAM)
}

fn block_cov(block: [[f64; 2]; 2], d: usize) -> Result<SymMatrix> {
    let mut m = Matrix::identity(d);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = block[i][j];
        }
    }
    SymMatrix::new(m, MatrixKind::Covariance)
}

fn pair_from_populations(
    cov_ref: SymMatrix,
    cov_syn: SymMatrix,
    n: usize,
    seed: u64,
    d_sigma: f64,
    exact_sin_theta: Option<f64>,
) -> Result<ScenarioPair> {
    let mean = alloc::vec![0.0; cov_ref.dim()];
    let samples_ref = sample_mvn_stream(&mean, &cov_ref, n, seed, REF_STREAM)?;
    let samples_syn = sample_mvn_stream(&mean, &cov_syn, n, seed, SYN_STREAM)?;
    let closed_forms = ClosedForms {
        d_sigma: Some(d_sigma),
        beta_ref: Some(population_slopes(&cov_ref, 0, &[1])?[0]),
        beta_syn: Some(population_slopes(&cov_syn, 0, &[1])?[0]),
        exact_sin_theta,
    };
    Ok(ScenarioPair {
        population_cov_ref: Some(cov_ref),
        population_cov_syn: Some(cov_syn),
        samples_ref,
        samples_syn,
        closed_forms,
    })
}

/// `σ²[[1, ρ], [ρ, 1]]` against `σ²[[1, −ρ], [−ρ, 1]]`.
pub fn make_sign_flip_pair(rho: f64, sigma2: f64, n: usize, seed: u64) -> Result<ScenarioPair> {
    make_sign_flip_pair_padded(rho, sigma2, 2, n, seed)
}

/// Sign-flip pair embedded in `d` dimensions with independent N(0, 1) padding.
pub fn make_sign_flip_pair_padded(rho: f64, sigma2: f64, d: usize, n: usize, seed: u64) -> Result<ScenarioPair> {
    check_rho(rho)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter("sigma2 must be positive"));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2"));
    }
    let (a, b) = (sigma2, sigma2 * rho);
    let cov_ref = block_cov([[a, b], [b, a]], d)?;
    let cov_syn = block_cov([[a, -b], [-b, a]], d)?;
    // Leading eigenvectors (1, ±1)/√2 are orthogonal unless padding dominates.
    let sin_theta = if rho == 0.0 {
        Some(0.0)
    } else if d == 2 || sigma2 * (1.0 + rho.abs()) > 1.0 {
        Some(1.0)
    } else {
        None
    };
    pair_from_populations(cov_ref, cov_syn, n, seed, 2.0 * SQRT_2 * sigma2 * rho.abs(), sin_theta)
}

/// `sin` of the angle between the leading eigenvectors of `diag(3, 1)` and `[[3, ε], [ε, 1]]`.
pub fn eigengap_sin_theta(epsilon: f64) -> f64 {
    let e = epsilon.abs();
    if e == 0.0 {
        return 0.0;
    }
    let a = 1.0 + libm::sqrt(1.0 + e * e);
    e / libm::sqrt(a * a + e * e)
}

/// `diag(3, 1)` against `[[3, ε], [ε, 1]]`; positive definite only for `ε² < 3`.
pub fn make_eigengap_pair(epsilon: f64, n: usize, seed: u64) -> Result<ScenarioPair> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter("epsilon must be nonnegative"));
    }
    if epsilon * epsilon >= 3.0 {
        return Err(Error::NotPositiveDefinite { pivot: 1 });
    }
    let cov_ref = block_cov([[3.0, 0.0], [0.0, 1.0]], 2)?;
    let cov_syn = block_cov([[3.0, epsilon], [epsilon, 1.0]], 2)?;
    pair_from_populations(cov_ref, cov_syn, n, seed, SQRT_2 * epsilon, Some(eigengap_sin_theta(epsilon)))
}

fn correlated_normals(rho: f64, rng: &mut StreamRng) -> (f64, f64) {
    let z1 = rng.standard_normal();
    let z2 = rng.standard_normal();
    (z1, rho * z1 + libm::sqrt(1.0 - rho * rho) * z2)
}

fn gaussian_copula_stream(rho: f64, n: usize, seed: u64, stream: u64) -> Result<DataMatrix> {
    check_rho(rho)?;
    check_n(n)?;
    let mut rng = StreamRng::new(seed, stream);
    let mut out = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let (x, y) = correlated_normals(rho, &mut rng);
        out.push(x);
        out.push(y);
    }
    DataMatrix::new(Matrix::from_vec(n, 2, out)?)
}

/// Bivariate normal with unit variances and correlation `ρ`.
pub fn sample_gaussian_copula(rho: f64, n: usize, seed: u64) -> Result<DataMatrix> {
    gaussian_copula_stream(rho, n, seed, REF_STREAM)
}

/// Maps a `t_ν` variate to the normal scale through its CDF. The upper half
/// goes through the lower tail by symmetry so no precision is lost near 1.
fn t_to_normal_score(t: f64, nu: f64) -> f64 {
    let tail = student_t_cdf(-t.abs(), nu).max(f64::MIN_POSITIVE);
    let z = normal_quantile(tail).unwrap_or(0.0);
    if t > 0.0 {
        -z
    } else {
        z
    }
}

/// Raw bivariate `t_ν` draws `Z / √(χ²_ν/ν)` before the marginal transform.
pub fn sample_t_pairs(rho: f64, nu: f64, n: usize, seed: u64) -> Result<DataMatrix> {
    check_rho(rho)?;
    check_n(n)?;
    if !(nu > 2.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter("nu must exceed 2"));
    }
    let mut rng = StreamRng::new(seed, SYN_STREAM);
    let mut out = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let (z1, z2) = correlated_normals(rho, &mut rng);
        let w = libm::sqrt(rng.chi_squared(nu) / nu);
        out.push(z1 / w);
        out.push(z2 / w);
    }
    DataMatrix::new(Matrix::from_vec(n, 2, out)?)
}

/// t-copula dependence with exactly standard-normal marginals.
pub fn sample_t_copula(rho: f64, nu: f64, n: usize, seed: u64) -> Result<DataMatrix> {
    let t = sample_t_pairs(rho, nu, n, seed)?;
    let scores: Vec<f64> = t.values().as_slice().iter().map(|&v| t_to_normal_score(v, nu)).collect();
    DataMatrix::new(Matrix::from_vec(n, 2, scores)?)
}

/// Two independent Gaussian-copula samples with the same `ρ` (a null pair).
pub fn make_gaussian_copula_pair(rho: f64, n: usize, seed: u64) -> Result<ScenarioPair> {
    let cov = block_cov([[1.0, rho], [rho, 1.0]], 2)?;
    Ok(ScenarioPair {
        population_cov_ref: Some(cov.clone()),
        population_cov_syn: Some(cov),
        samples_ref: gaussian_copula_stream(rho, n, seed, REF_STREAM)?,
        samples_syn: gaussian_copula_stream(rho, n, seed, SYN_STREAM)?,
        closed_forms: ClosedForms {
            d_sigma: Some(0.0),
            beta_ref: Some(rho),
            beta_syn: Some(rho),
            exact_sin_theta: Some(0.0),
        },
    })
}

/// Gaussian-copula reference against a t-copula synthetic side, same `ρ`.
pub fn make_t_copula_pair(rho: f64, nu: f64, n: usize, seed: u64) -> Result<ScenarioPair> {
    let cov_ref = block_cov([[1.0, rho], [rho, 1.0]], 2)?;
    Ok(ScenarioPair {
        population_cov_ref: Some(cov_ref),
        population_cov_syn: None,
        samples_ref: sample_gaussian_copula(rho, n, seed)?,
        samples_syn: sample_t_copula(rho, nu, n, seed)?,
        closed_forms: ClosedForms { d_sigma: None, beta_ref: Some(rho), beta_syn: None, exact_sin_theta: None },
    })
}

/// `[[1, ρ], [ρ, 1]]` against its diagonal (the identity).
pub fn make_diagonal_collapse_pair(rho: f64, n: usize, seed: u64) -> Result<ScenarioPair> {
    make_diagonal_collapse_pair_padded(rho, 2, n, seed)
}

pub fn make_diagonal_collapse_pair_padded(rho: f64, d: usize, n: usize, seed: u64) -> Result<ScenarioPair> {
    check_rho(rho)?;
    if d < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2"));
    }
    let cov_ref = block_cov([[1.0, rho], [rho, 1.0]], d)?;
    // The identity's leading eigenvector is e₁ under the lowest-index tie-break.
    let sin_theta = if rho == 0.0 { 0.0 } else { core::f64::consts::FRAC_1_SQRT_2 };
    pair_from_populations(cov_ref, SymMatrix::identity(d), n, seed, SQRT_2 * rho.abs(), Some(sin_theta))
}

/// Frobenius norm of the strictly off-diagonal part.
pub fn off_diagonal_norm(cov: &SymMatrix) -> f64 {
    let d = cov.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += cov.get(i, j) * cov.get(i, j);
            }
        }
    }
    libm::sqrt(s)
}

/// Column means and column variances only; covariance structure is dropped.
pub fn fit_marginal_gaussian(data: &DataMatrix) -> Result<GaussianFit> {
    let full = fit_full_gaussian(data)?;
    let cov = SymMatrix::new(Matrix::from_diagonal(&full.cov.diagonal()), MatrixKind::Covariance)?;
    Ok(GaussianFit { mean: full.mean, cov })
}

/// Empirical mean and full empirical covariance.
pub fn fit_full_gaussian(data: &DataMatrix) -> Result<GaussianFit> {
    check_n(data.n())?;
    Ok(GaussianFit { mean: data.column_means(), cov: estimate_covariance(data, CovarianceMode::Empirical)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{d_sigma, davis_kahan_bound, joint_tail_probability};
    use crate::linalg::{frobenius_norm, principal_subspace, subspace_sin_theta, sym_eigendecompose};
    use crate::marginals::ks_two_sample;
    use crate::special::normal_sf;

    fn population_gap(pair: &ScenarioPair) -> f64 {
        let a = pair.population_cov_ref.as_ref().unwrap();
        let b = pair.population_cov_syn.as_ref().unwrap();
        frobenius_norm(&SymMatrix::new(a.entries().sub(b.entries()).unwrap(), MatrixKind::Generic).unwrap())
    }

    fn fresh_normals(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = StreamRng::new(seed, 99);
        (0..n).map(|_| rng.standard_normal()).collect()
    }

    #[test]
    fn mvn_sample_covariance_concentrates() {
        let cov = SymMatrix::covariance(&[[1.0, 0.6], [0.6, 1.0]]).unwrap();
        let x = sample_mvn(&[0.0, 0.0], &cov, 100_000, 7).unwrap();
        let s = estimate_covariance(&x, CovarianceMode::Empirical).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((s.get(i, j) - cov.get(i, j)).abs() < 0.02);
            }
        }
    }

    #[test]
    fn mvn_identity_means_and_determinism() {
        let n = 20_000;
        let x = sample_mvn(&[0.0; 3], &SymMatrix::identity(3), n, 3).unwrap();
        let bound = 3.0 / libm::sqrt(n as f64);
        assert!(x.column_means().iter().all(|m| m.abs() < bound));
        let y = sample_mvn(&[0.0; 3], &SymMatrix::identity(3), n, 3).unwrap();
        assert_eq!(x, y);
        let singular = SymMatrix::covariance(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(sample_mvn(&[0.0, 0.0], &singular, 10, 0), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn sign_flip_closed_forms() {
        let p = make_sign_flip_pair(0.6, 1.0, 100, 42).unwrap();
        let cf = p.closed_forms;
        assert!((cf.d_sigma.unwrap() - 1.697_056_274_847_714).abs() < 1e-12);
        assert_eq!((cf.beta_ref, cf.beta_syn), (Some(0.6), Some(-0.6)));
        assert!((population_gap(&p) - cf.d_sigma.unwrap()).abs() < 1e-12);

        let p = make_sign_flip_pair(0.0, 1.0, 100, 42).unwrap();
        assert_eq!(p.closed_forms.d_sigma, Some(0.0));
        assert_eq!(p.population_cov_ref.unwrap(), p.population_cov_syn.unwrap());

        let p = make_sign_flip_pair(0.5, 4.0, 100, 42).unwrap();
        assert!((p.closed_forms.d_sigma.unwrap() - 4.0 * SQRT_2).abs() < 1e-12);
        assert_eq!((p.closed_forms.beta_ref, p.closed_forms.beta_syn), (Some(0.5), Some(-0.5)));
    }

    #[test]
    fn sign_flip_is_linear_in_sigma2() {
        for &s2 in &[1.0, 10.0, 100.0] {
            let p = make_sign_flip_pair(0.5, s2, 10, 1).unwrap();
            let expected = 2.0 * SQRT_2 * s2 * 0.5;
            assert!((p.closed_forms.d_sigma.unwrap() - expected).abs() < 1e-12 * s2);
            assert!((population_gap(&p) - expected).abs() < 1e-12 * s2);
        }
    }

    #[test]
    fn sign_flip_padding_keeps_d_sigma() {
        let p = make_sign_flip_pair_padded(0.6, 1.0, 5, 50, 2).unwrap();
        assert_eq!(p.samples_ref.d(), 5);
        assert!((population_gap(&p) - 2.0 * SQRT_2 * 0.6).abs() < 1e-12);
    }

    #[test]
    fn eigengap_examples() {
        let p = make_eigengap_pair(0.0, 10, 1).unwrap();
        assert_eq!(p.closed_forms.d_sigma, Some(0.0));
        assert_eq!(p.closed_forms.exact_sin_theta, Some(0.0));

        let p = make_eigengap_pair(0.5, 10, 1).unwrap();
        assert!((p.closed_forms.d_sigma.unwrap() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((p.closed_forms.exact_sin_theta.unwrap() - 0.229_753).abs() < 1e-6);

        let p = make_eigengap_pair(1.5, 10, 1).unwrap();
        let dk = davis_kahan_bound(p.closed_forms.d_sigma.unwrap(), 2.0);
        assert!(dk.vacuous && (dk.value - SQRT_2 * 1.5).abs() < 1e-12);
        assert!(p.closed_forms.exact_sin_theta.unwrap() < 1.0);

        assert!(matches!(make_eigengap_pair(1.8, 10, 1), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn eigengap_closed_form_matches_eigensolver() {
        for k in 0..=34 {
            let eps = 0.05 * k as f64;
            let p = make_eigengap_pair(eps, 10, 0).unwrap();
            let u =
                principal_subspace(&sym_eigendecompose(p.population_cov_ref.as_ref().unwrap()).unwrap(), 1).unwrap();
            let v =
                principal_subspace(&sym_eigendecompose(p.population_cov_syn.as_ref().unwrap()).unwrap(), 1).unwrap();
            let s = subspace_sin_theta(&u, &v).unwrap();
            assert!((s - eigengap_sin_theta(eps)).abs() < 1e-10, "eps={eps}");
        }
    }

    #[test]
    fn gaussian_copula_samples() {
        let n = 100_000;
        let x = sample_gaussian_copula(0.5, n, 42).unwrap();
        let r = estimate_covariance(&x, CovarianceMode::Empirical).unwrap();
        assert!((r.get(0, 1) / libm::sqrt(r.get(0, 0) * r.get(1, 1)) - 0.5).abs() < 0.02);
        let z = fresh_normals(n, 1);
        for j in 0..2 {
            assert!(ks_two_sample(&x.column(j), &z).unwrap().statistic < 0.01);
        }
        let ind = sample_gaussian_copula(0.0, n, 11).unwrap();
        let p = joint_tail_probability(&ind, 0, 1, 2.0).unwrap();
        let q = normal_sf(2.0) * normal_sf(2.0);
        assert!((q - 0.000_518).abs() < 1e-6);
        assert!((p - q).abs() < 3.0 * libm::sqrt(q * (1.0 - q) / n as f64));
    }

    #[test]
    fn t_copula_marginals_and_tails() {
        let n = 100_000;
        let t = sample_t_copula(0.5, 3.0, n, 42).unwrap();
        let z = fresh_normals(n, 2);
        for j in 0..2 {
            assert!(ks_two_sample(&t.column(j), &z).unwrap().statistic < 0.01);
        }
        let g = sample_gaussian_copula(0.5, n, 42).unwrap();
        let pt = joint_tail_probability(&t, 0, 1, 2.0).unwrap();
        let pg = joint_tail_probability(&g, 0, 1, 2.0).unwrap();
        let se = libm::sqrt(pt * (1.0 - pt) / n as f64 + pg * (1.0 - pg) / n as f64);
        assert!(pt - pg > 3.0 * se, "pt={pt} pg={pg}");
        assert_eq!(sample_t_copula(0.5, 3.0, 500, 9).unwrap(), sample_t_copula(0.5, 3.0, 500, 9).unwrap());
        assert!(sample_t_copula(0.5, 2.0, 10, 9).is_err());
    }

    #[test]
    fn t_copula_transform_preserves_ranks() {
        let raw = sample_t_pairs(0.3, 4.0, 2000, 5).unwrap();
        let scored = sample_t_copula(0.3, 4.0, 2000, 5).unwrap();
        for j in 0..2 {
            let (a, b) = (raw.column(j), scored.column(j));
            for i in 1..a.len() {
                if a[i] < a[i - 1] {
                    assert!(b[i] <= b[i - 1]);
                } else if a[i] > a[i - 1] {
                    assert!(b[i] >= b[i - 1]);
                }
            }
        }
    }

    #[test]
    fn diagonal_collapse_examples() {
        let p = make_diagonal_collapse_pair(0.8, 10, 1).unwrap();
        let cf = p.closed_forms;
        assert!((cf.d_sigma.unwrap() - 1.131_370_849_898_476).abs() < 1e-12);
        assert_eq!((cf.beta_ref, cf.beta_syn), (Some(0.8), Some(0.0)));
        assert!((cf.beta_ref.unwrap() - cf.beta_syn.unwrap()).abs() == 0.8);
        assert!((population_gap(&p) - cf.d_sigma.unwrap()).abs() < 1e-12);
        let u = principal_subspace(&sym_eigendecompose(p.population_cov_ref.as_ref().unwrap()).unwrap(), 1).unwrap();
        let v = principal_subspace(&sym_eigendecompose(p.population_cov_syn.as_ref().unwrap()).unwrap(), 1).unwrap();
        assert!((subspace_sin_theta(&u, &v).unwrap() - cf.exact_sin_theta.unwrap()).abs() < 1e-12);

        let p = make_diagonal_collapse_pair(0.0, 10, 1).unwrap();
        assert_eq!((p.closed_forms.d_sigma, p.closed_forms.exact_sin_theta), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn off_diagonal_norm_examples() {
        assert_eq!(off_diagonal_norm(&SymMatrix::covariance(&[[2.0, 0.0], [0.0, 5.0]]).unwrap()), 0.0);
        let c = SymMatrix::covariance(&[[1.0, 0.8], [0.8, 1.0]]).unwrap();
        assert!((off_diagonal_norm(&c) - SQRT_2 * 0.8).abs() < 1e-15);
        let c = SymMatrix::covariance(&[[2.0, 1.0, 0.0], [1.0, 3.0, 2.0], [0.0, 2.0, 1.0]]).unwrap();
        assert!((off_diagonal_norm(&c) - libm::sqrt(10.0)).abs() < 1e-15);
    }

    #[test]
    fn marginal_fit_by_hand() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0], [6.0, 0.0]]).unwrap();
        let f = fit_marginal_gaussian(&x).unwrap();
        assert_eq!(f.mean, alloc::vec![3.0, 3.0]);
        // Σ(x − 3)² = 4 + 1 + 0 + 9 = 14; Σ(y − 3)² = 1 + 1 + 9 + 9 = 20.
        assert!((f.cov.get(0, 0) - 14.0 / 3.0).abs() < 1e-15);
        assert!((f.cov.get(1, 1) - 20.0 / 3.0).abs() < 1e-15);
        assert_eq!(off_diagonal_norm(&f.cov), 0.0);
        let c = DataMatrix::from_rows(&[[1.0, 5.0], [2.0, 5.0], [4.0, 5.0]]).unwrap();
        assert_eq!(fit_marginal_gaussian(&c).unwrap().cov.get(1, 1), 0.0);
    }

    #[test]
    fn full_fit_closes_and_detects_degeneracy() {
        let cov = SymMatrix::covariance(&[[2.0, 0.7, 0.1], [0.7, 1.0, 0.3], [0.1, 0.3, 1.5]]).unwrap();
        let x = sample_mvn(&[1.0, -1.0, 0.0], &cov, 100_000, 8).unwrap();
        let f = fit_full_gaussian(&x).unwrap();
        let y = f.sample(100_000, 9).unwrap();
        let g = fit_full_gaussian(&y).unwrap();
        assert!(d_sigma(&g.cov, &cov).unwrap() < 0.05 * frobenius_norm(&cov));

        let ident = sample_mvn(&[0.0, 0.0], &SymMatrix::identity(2), 100_000, 10).unwrap();
        let fi = fit_full_gaussian(&ident).unwrap();
        assert!(fi.cov.entries().sub(SymMatrix::identity(2).entries()).unwrap().max_abs() < 0.02);

        let two = DataMatrix::from_rows(&[[0.0, 1.0], [1.0, 3.0]]).unwrap();
        let f2 = fit_full_gaussian(&two).unwrap();
        assert!(matches!(f2.sample(10, 0), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn spec_validation() {
        let mut s = ScenarioSpec::new(ScenarioKind::TCopula);
        s.nu = 2.0;
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::new(ScenarioKind::SignFlip);
        s.rho = 1.0;
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::new(ScenarioKind::Eigengap);
        s.epsilon = -0.1;
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::new(ScenarioKind::GaussianCopula);
        s.d = 3;
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::new(ScenarioKind::DiagonalCollapse);
        s.d = 4;
        s.n = 20;
        assert_eq!(s.generate().unwrap().samples_syn.d(), 4);
    }
}
