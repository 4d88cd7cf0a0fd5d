use std::f64::consts::SQRT_2;

use depfid_core::diagnostics::{d_sigma, population_slopes, slope_instability};
use depfid_core::kernel::mmd_unbiased;
use depfid_core::linalg::estimate_covariance;
use depfid_core::marginals::ks_profile;
use depfid_core::scenarios::{make_sign_flip_pair, make_sign_flip_pair_padded, sample_mvn, ScenarioKind, ScenarioSpec};
use depfid_core::{CovarianceMode, SymMatrix};

#[test]
fn slope_gap_meets_bound_with_equality_for_sign_flips() {
    for &rho in &[0.2, 0.5, 0.8] {
        let p = make_sign_flip_pair(rho, 1.0, 10, 0).unwrap();
        let (a, b) = (p.population_cov_ref.unwrap(), p.population_cov_syn.unwrap());
        let sa = population_slopes(&a, 0, &[1]).unwrap();
        let sb = population_slopes(&b, 0, &[1]).unwrap();
        let d = d_sigma(&a, &b).unwrap();
        let cmp = slope_instability(0, &[1], &sa, &sb, &[a.get(1, 1)], &[b.get(1, 1)], d).unwrap();
        assert_eq!(cmp.sign_flips, 1);
        assert!((cmp.max_abs_delta() - d / SQRT_2).abs() < 1e-12);
        assert!((cmp.slope_bound.unwrap() - cmp.max_abs_delta()).abs() < 1e-12);
    }
}

#[test]
fn padded_sign_flip_keeps_marginals_and_divergence() {
    let p = make_sign_flip_pair_padded(0.5, 1.0, 5, 50_000, 3).unwrap();
    let ks = ks_profile(&p.samples_ref, &p.samples_syn).unwrap();
    assert!(ks.per_dimension.iter().all(|r| r.statistic < 0.015));
    let a = estimate_covariance(&p.samples_ref, CovarianceMode::Empirical).unwrap();
    let b = estimate_covariance(&p.samples_syn, CovarianceMode::Empirical).unwrap();
    assert!((d_sigma(&a, &b).unwrap() - SQRT_2).abs() < 0.05);
}

#[test]
fn mmd_between_halves_of_one_distribution_averages_zero() {
    let cov = SymMatrix::covariance(&[[1.0, 0.3], [0.3, 1.0]]).unwrap();
    let reps = 200;
    let values: Vec<f64> = (0..reps)
        .map(|s| {
            let x = sample_mvn(&[0.0, 0.0], &cov, 60, 2 * s).unwrap();
            let y = sample_mvn(&[0.0, 0.0], &cov, 60, 2 * s + 1).unwrap();
            mmd_unbiased(&x, &y, 1.0).unwrap().mmd_squared_unbiased
        })
        .collect();
    let mean = values.iter().sum::<f64>() / reps as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
    assert!(mean.abs() < 3.0 * (var / reps as f64).sqrt(), "mean={mean}");
}

#[test]
fn every_scenario_is_a_pure_function_of_its_spec() {
    for kind in [
        ScenarioKind::SignFlip,
        ScenarioKind::Eigengap,
        ScenarioKind::GaussianCopula,
        ScenarioKind::TCopula,
        ScenarioKind::DiagonalCollapse,
    ] {
        let mut spec = ScenarioSpec::new(kind);
        spec.n = 300;
        let a = spec.generate().unwrap();
        let b = spec.generate().unwrap();
        assert_eq!(a.samples_ref, b.samples_ref);
        assert_eq!(a.samples_syn, b.samples_syn);
        assert_ne!(a.samples_ref, a.samples_syn);
        if let (Some(d), Some(x), Some(y)) = (a.closed_forms.d_sigma, &a.population_cov_ref, &a.population_cov_syn) {
            assert!((d - d_sigma(x, y).unwrap()).abs() < 1e-12, "{}", kind.as_str());
        }
    }
}
