use mallows_core::constants::{
    alpha1, estimate_renewal_constants, estimate_symmetric_constants, stationary_mu, DEFAULT_TOL,
};
use mallows_core::{Executor, RngStream};

#[test]
fn renewal_estimates_agree_with_series() {
    let q = 0.5;
    let r = estimate_renewal_constants(q, 200_000, 4, 50, &Executor::sequential(), RngStream::new(1, 0)).unwrap();
    let mu = 1.0 / stationary_mu(q, None, DEFAULT_TOL).unwrap().mu0();
    assert!((r.mu - mu).abs() < 3.0 * r.standard_errors.mu, "{} vs {mu}", r.mu);
    let a = alpha1(q, DEFAULT_TOL).unwrap().value;
    assert!((r.alpha[0] - a).abs() < 3.0 * r.standard_errors.alpha[0], "{} vs {a}", r.alpha[0]);
    assert_eq!(r.alpha.len(), 4);
    assert!(r.is_symmetric());
    assert!(r.beta_total > 0.0);
    let min_se = r.standard_errors.beta.iter().flatten().cloned().fold(0.0, f64::max);
    assert!(r.beta_min_eigenvalue() >= -3.0 * min_se, "{}", r.beta_min_eigenvalue());
    // all points lie on some cycle
    let points: f64 = r.alpha.iter().enumerate().map(|(i, a)| (i + 1) as f64 * a).sum::<f64>() + r.tail_point_rate;
    assert!((points - 1.0).abs() < 1e-9, "{points}");
}

#[test]
fn standard_errors_shrink_with_sample_count() {
    let exec = Executor::sequential();
    let small = estimate_renewal_constants(0.5, 100_000, 2, 50, &exec, RngStream::new(2, 0)).unwrap();
    let large = estimate_renewal_constants(0.5, 200_000, 2, 50, &exec, RngStream::new(2, 1)).unwrap();
    let ratio = large.standard_errors.alpha[0] / small.standard_errors.alpha[0];
    assert!((ratio / std::f64::consts::FRAC_1_SQRT_2 - 1.0).abs() < 0.2, "{ratio}");
    let ratio = large.standard_errors.beta_total / small.standard_errors.beta_total;
    assert!((ratio / std::f64::consts::FRAC_1_SQRT_2 - 1.0).abs() < 0.3, "{ratio}");
}

#[test]
fn near_zero_parameter_is_all_fixed_points() {
    let r = estimate_renewal_constants(1e-9, 10_000, 3, 10, &Executor::sequential(), RngStream::new(3, 0)).unwrap();
    assert!((r.mu - 1.0).abs() < 1e-6);
    assert!((r.alpha[0] - 1.0).abs() < 1e-6);
    assert!(r.alpha[1].abs() < 1e-6);
    assert!(r.beta_total.abs() < 1e-6);
}

#[test]
fn large_parameter_pairs_are_transpositions() {
    let r = estimate_symmetric_constants(50.0, 20_000, 3, 1000, 20, &Executor::sequential(), RngStream::new(4, 0))
        .unwrap();
    let mu0 = stationary_mu(1.0 / 50.0, None, DEFAULT_TOL).unwrap().mu0();
    let target = 2.0 / (mu0 * mu0);
    assert!((r.mu - target).abs() < 3.0 * r.standard_errors.mu, "{} vs {target}", r.mu);
    // blocks of length 2 are transpositions and carry almost all points
    let p2 = (1.0f64 - 1.0 / 50.0).powi(2) / target;
    assert!((r.alpha[0] - p2).abs() < 0.005, "{} vs {p2}", r.alpha[0]);
    let points: f64 = r.alpha.iter().enumerate().map(|(i, a)| 2.0 * (i + 1) as f64 * a).sum::<f64>() + r.tail_point_rate;
    assert!((points - 1.0).abs() < 1e-9, "{points}");
    assert_eq!(r.ambient_n, Some(1000));
    assert!(r.is_symmetric());
}

#[test]
fn parameter_ranges_are_enforced() {
    let exec = Executor::sequential();
    assert!(estimate_renewal_constants(1.5, 100, 2, 10, &exec, RngStream::new(1, 0)).is_err());
    assert!(estimate_renewal_constants(0.5, 100, 0, 10, &exec, RngStream::new(1, 0)).is_err());
    assert!(estimate_renewal_constants(0.5, 10, 2, 10, &exec, RngStream::new(1, 0)).is_err());
    assert!(estimate_symmetric_constants(0.5, 100, 2, 100, 10, &exec, RngStream::new(1, 0)).is_err());
}

#[test]
fn estimates_do_not_depend_on_worker_count() {
    let one = estimate_renewal_constants(0.7, 20_000, 3, 20, &Executor::sequential(), RngStream::new(5, 0)).unwrap();
    let four = estimate_renewal_constants(
        0.7,
        20_000,
        3,
        20,
        &Executor::new(4, Default::default()),
        RngStream::new(5, 0),
    )
    .unwrap();
    assert_eq!(one.alpha, four.alpha);
    assert_eq!(one.beta, four.beta);
    assert_eq!(one.standard_errors, four.standard_errors);
}
