use mallows_core::constants::{stationary_mu, DEFAULT_TOL};
use mallows_core::exact::exact_distribution;
use mallows_core::perm::{inversions, reverse, Permutation};
use mallows_core::sampler::{geometric, sample_finite, sample_process_prefix, FiniteSampler, MallowsProcess};
use mallows_core::stats::{batch_std_error, chi_square_gof, chi_square_two_sample};
use mallows_core::validate::{lexicographic_rank, sample_histogram};
use mallows_core::{Executor, Plan, RngStream};

fn exact_probs(n: usize, q: f64) -> Vec<f64> {
    exact_distribution(n, q).unwrap().entries.iter().map(|e| e.probability).collect()
}

#[test]
fn geometric_moments() {
    let mut rng = RngStream::new(1, 0).rng();
    let draws: Vec<u64> = (0..1_000_000).map(|_| geometric(0.5, &mut rng).unwrap()).collect();
    let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
    assert!((mean - 2.0).abs() < 0.01, "{mean}");
    let p3 = draws.iter().filter(|&&k| k == 3).count() as f64 / draws.len() as f64;
    assert!((p3 - 0.125).abs() < 0.002, "{p3}");
    assert!((0..1000).all(|_| geometric(1e-300, &mut rng).unwrap() == 1));
    assert!(geometric(1.0, &mut rng).is_err());
    assert!(geometric(0.0, &mut rng).is_err());
}

#[test]
fn finite_sampler_basics() {
    let mut rng = RngStream::new(2, 0).rng();
    for q in [0.1, 1.0, 9.0] {
        assert_eq!(sample_finite(1, q, &mut rng).unwrap(), Permutation::identity(1));
        assert!(sample_finite(0, q, &mut rng).unwrap().is_empty());
    }
    assert!(sample_finite(3, 0.0, &mut rng).is_err());
    assert!(sample_finite(3, -1.0, &mut rng).is_err());
    assert_eq!(sample_finite(50, 1e-300, &mut rng).unwrap(), Permutation::identity(50));
    assert_eq!(sample_finite(50, 1e300, &mut rng).unwrap(), Permutation::reversal(50));
}

#[test]
fn chi_square_against_oracle() {
    let exec = Executor::sequential();
    for q in [0.5, 2.0] {
        let observed = sample_histogram(q, 5, 1_000_000, &exec, RngStream::new(3, q.to_bits()));
        let chi = chi_square_gof(&observed.unwrap(), &exact_probs(5, q), 5.0);
        assert!(chi.p_value > 1e-3, "q={q}: {chi:?}");
        assert_eq!(chi.degrees_of_freedom, 119);
    }
    // uniform q = 1 is allowed
    let observed = sample_histogram(1.0, 4, 100_000, &exec, RngStream::new(3, 1)).unwrap();
    assert!(chi_square_gof(&observed, &exact_probs(4, 1.0), 5.0).p_value > 1e-3);
}

#[test]
fn sampler_has_power_against_a_wrong_parameter() {
    let exec = Executor::sequential();
    let observed = sample_histogram(0.55, 5, 1_000_000, &exec, RngStream::new(4, 0)).unwrap();
    assert!(chi_square_gof(&observed, &exact_probs(5, 0.5), 5.0).p_value < 1e-6);
}

#[test]
fn reversal_of_inverse_parameter_has_the_same_law() {
    let mut rng = RngStream::new(5, 0).rng();
    for n in [3, 4, 5] {
        for q in [0.4, 2.5] {
            let cells: usize = (1..=n).product();
            let mut a = vec![0u64; cells];
            let mut b = vec![0u64; cells];
            for _ in 0..200_000 {
                a[lexicographic_rank(sample_finite(n, q, &mut rng).unwrap().as_slice())] += 1;
                let r = reverse(&sample_finite(n, 1.0 / q, &mut rng).unwrap());
                b[lexicographic_rank(r.as_slice())] += 1;
            }
            let chi = chi_square_two_sample(&a, &b);
            assert!(chi.p_value > 1e-3, "n={n} q={q}: {chi:?}");
        }
    }
}

#[test]
fn inversion_histogram_at_six() {
    let exact = exact_distribution(6, 0.7).unwrap().inversion_marginal();
    let sampler = FiniteSampler::new(6, 0.7).unwrap();
    let mut rng = RngStream::new(6, 0).rng();
    let mut counts = vec![0u64; exact.len()];
    for _ in 0..500_000 {
        counts[inversions(&sampler.sample(&mut rng)) as usize] += 1;
    }
    let chi = chi_square_gof(&counts, &exact, 5.0);
    assert!(chi.p_value > 1e-3, "{chi:?}");
}

#[test]
fn seeded_determinism() {
    let draw = |seed, stream| {
        let mut rng = RngStream::new(seed, stream).rng();
        (0..20).map(|_| sample_finite(30, 0.8, &mut rng).unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(draw(9, 0), draw(9, 0));
    assert_ne!(draw(9, 0), draw(9, 1));
    assert_ne!(draw(9, 0), draw(10, 0));

    let sequential = sample_histogram(0.3, 4, 10_000, &Executor::sequential(), RngStream::new(1, 0)).unwrap();
    let parallel = sample_histogram(0.3, 4, 10_000, &Executor::new(3, Plan::default()), RngStream::new(1, 0)).unwrap();
    assert_eq!(sequential, parallel);
}

#[test]
fn process_prefix_relative_order_is_mallows() {
    let probs = exact_probs(5, 0.5);
    let mut counts = vec![0u64; probs.len()];
    let base = RngStream::new(7, 0);
    // a window away from the origin: positions 4..=8
    for k in 0..200_000u64 {
        let prefix = sample_process_prefix(0.5, 8, base.child(k).rng()).unwrap();
        counts[lexicographic_rank(prefix.relative_order(4, 8).as_slice())] += 1;
    }
    let chi = chi_square_gof(&counts, &probs, 5.0);
    assert!(chi.p_value > 1e-3, "{chi:?}");
}

#[test]
fn process_prefix_degenerates_near_zero() {
    let prefix = sample_process_prefix(1e-300, 50, RngStream::new(1, 0).rng()).unwrap();
    assert_eq!(prefix.values, (1..=50).collect::<Vec<_>>());
    assert_eq!(prefix.horizon(), 50);
    assert!(sample_process_prefix(1.5, 5, RngStream::new(1, 0).rng()).is_err());
    assert!(sample_process_prefix(0.5, 0, RngStream::new(1, 0).rng()).is_err());
}

#[test]
fn running_maximum_gap_has_stationary_mean() {
    let q = 0.5;
    let law = stationary_mu(q, None, DEFAULT_TOL).unwrap();
    let mut process = MallowsProcess::new(q, RngStream::new(8, 0).rng()).unwrap();
    let t = 100_000;
    let batches = 100;
    let mut means = Vec::with_capacity(batches);
    let mut acc = 0.0;
    for i in 1..=t {
        acc += process.step().chain as f64;
        if i % (t / batches) == 0 {
            means.push(acc / (t / batches) as f64);
            acc = 0.0;
        }
    }
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    let se = batch_std_error(&means);
    assert!((mean - law.mean()).abs() < 3.0 * se, "{mean} vs {} (se {se})", law.mean());
}
