use mallows_core::constants::{alpha1, DEFAULT_TOL};
use mallows_core::harness::{
    clt_check, mean_variance_scaling, normal_draws, parity_limit_check, sample_statistic_rows,
    size_bias_convergence, threshold_meta_test, CycleSelection, CycleStatistic, NormalityReport,
    ShapeThresholds,
};
use mallows_core::regen::DEFAULT_STEP_CAP;
use mallows_core::{Executor, Plan, RngStream};

#[test]
fn meta_test_across_seeds() {
    for seed in 0..5 {
        let m = threshold_meta_test(100_000, ShapeThresholds::default(), RngStream::new(seed, 0));
        assert!(m.passed, "seed {seed}: {m:?}");
    }
}

#[test]
fn shifted_normal_passes_and_uniform_fails() {
    let mut rng = RngStream::new(1, 0).rng();
    let shifted: Vec<f64> = normal_draws(50_000, &mut rng).iter().map(|x| 5.0 + 3.0 * x).collect();
    assert!(NormalityReport::from_values("n", 0, &shifted, ShapeThresholds::default()).passed);
    let uniform: Vec<f64> = (0..50_000).map(|i| i as f64).collect();
    let r = NormalityReport::from_values("u", 0, &uniform, ShapeThresholds::default());
    assert!(!r.kurtosis_pass && !r.passed);
}

#[test]
fn fixed_points_vanish_for_even_n_at_large_q() {
    let sel = CycleSelection(vec![CycleStatistic::Length(1), CycleStatistic::Length(2)]);
    let rows = sample_statistic_rows(50.0, 200, 2000, &sel, &Executor::sequential(), RngStream::new(2, 0)).unwrap();
    // a fixed point needs the central block, which is empty for even n most of the time
    let with_fixed = rows.iter().filter(|r| r[0] > 0).count();
    assert!(with_fixed < 200, "{with_fixed}");
    assert!(rows.iter().all(|r| r[0] + 2 * r[1] <= 200));
    let odd = sample_statistic_rows(50.0, 201, 2000, &sel, &Executor::sequential(), RngStream::new(2, 1)).unwrap();
    let with_fixed = odd.iter().filter(|r| r[0] > 0).count();
    assert!(with_fixed > 1800, "{with_fixed}");
}

#[test]
fn clt_mean_density_matches_series() {
    let r = clt_check(
        0.5,
        2000,
        4000,
        &[CycleStatistic::Length(1), CycleStatistic::Total],
        ShapeThresholds::default(),
        &Executor::sequential(),
        RngStream::new(3, 0),
    )
    .unwrap();
    let a = alpha1(0.5, DEFAULT_TOL).unwrap().value;
    let se = (r.cov_over_n[0][0] / 2000.0 / 4000.0).sqrt() * 2000f64.sqrt();
    assert!((r.mean_over_n[0] - a).abs() < 4.0 * se + 1e-3, "{} vs {a}", r.mean_over_n[0]);
    assert_eq!(r.index_of(CycleStatistic::Total), Some(1));
    assert_eq!(r.cov_over_n[0][1], r.cov_over_n[1][0]);
}

#[test]
fn raw_fixed_points_stabilize_above_one() {
    let t = mean_variance_scaling(2.0, &[400, 800], 20_000, CycleStatistic::Length(1), &Executor::sequential(), RngStream::new(4, 0))
        .unwrap();
    assert!(t.stabilization(false, 3.5).iter().all(|a| a.passed), "{t:?}");
    // the per-n mean shrinks like 1/n
    assert!(t.per_n[1].mean < 0.75 * t.per_n[0].mean);
}

#[test]
fn parity_limits_separate_even_and_odd() {
    let c = parity_limit_check(2.0, 300, 20_000, 3, &Executor::sequential(), RngStream::new(5, 0)).unwrap();
    assert!(c.same.same_parity && !c.adjacent.same_parity);
    assert!(c.same.pmfs[0].tv < 0.02, "{}", c.same.pmfs[0].tv);
    assert!(c.adjacent.pmfs[0].tv > 0.04, "{}", c.adjacent.pmfs[0].tv);
    assert!(c.same.odd_total.passed);
    assert!(!c.adjacent.odd_total.passed);
}

#[test]
fn size_bias_degenerates_near_zero() {
    let t = size_bias_convergence(1e-9, &[10, 100], 1000, 10_000, DEFAULT_STEP_CAP, &Executor::sequential(), RngStream::new(6, 0))
        .unwrap();
    assert!((t.block_mean - 1.0).abs() < 1e-9);
    assert!((t.size_biased_mean - 1.0).abs() < 1e-9);
    assert!(t.rows.iter().all(|r| r.covering_mean == 1.0));
    assert_eq!(t.block, "T");
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let stats = [CycleStatistic::Length(1), CycleStatistic::Length(2)];
    let run = |workers| {
        let exec = Executor::new(workers, Plan::new(8));
        let r = clt_check(0.6, 300, 2000, &stats, ShapeThresholds::default(), &exec, RngStream::new(7, 0)).unwrap();
        (r.mean_over_n, r.cov_over_n, r.normality)
    };
    assert_eq!(run(1), run(4));
}
