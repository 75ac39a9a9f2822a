use mallows_core::constants::{stationary_mu, DEFAULT_TOL};
use mallows_core::regen::{
    block_length_moments, covering_block_length, occupation_distribution, pair_chain_return_times,
    sample_excursions, sample_symmetric_blocks, single_chain_return_times, HarvestPolicy, Parity,
    DEFAULT_STEP_CAP,
};
use mallows_core::stats::{tv_distance, PowerSums};
use mallows_core::{Executor, RngStream};

fn sums(values: &[u64]) -> PowerSums {
    let mut s = PowerSums::default();
    values.iter().for_each(|&v| s.push(v));
    s
}

fn mu0(q: f64) -> f64 {
    stationary_mu(q, None, DEFAULT_TOL).unwrap().mu0()
}

#[test]
fn return_time_mean_is_inverse_stationary_mass() {
    for q in [0.3, 0.5, 0.8] {
        let mut rng = RngStream::new(1, 0).rng();
        let t = sums(&single_chain_return_times(q, 400_000, DEFAULT_STEP_CAP, &mut rng).unwrap());
        let target = 1.0 / mu0(q);
        assert!((t.mean() - target).abs() < 3.0 * t.std_error(), "q={q}: {} vs {target}", t.mean());
    }
}

#[test]
fn process_excursions_match_chain_returns() {
    let q = 0.5;
    let ex = sample_excursions(q, 200_000, DEFAULT_STEP_CAP, RngStream::new(2, 0).rng()).unwrap();
    let lens: Vec<u64> = ex.iter().map(|e| e.length() as u64).collect();
    let direct = sums(&lens);
    let target = 1.0 / mu0(q);
    assert!((direct.mean() - target).abs() < 3.0 * direct.std_error());
    // P(T = 1) is the chance of a fixed point at the start: 1 - q
    let p1 = lens.iter().filter(|&&l| l == 1).count() as f64 / lens.len() as f64;
    assert!((p1 - (1.0 - q)).abs() < 0.005, "{p1}");
    assert!(ex.iter().all(|e| e.is_irreducible()));
}

#[test]
fn pair_chain_return_law() {
    let q = 0.5;
    let mut rng = RngStream::new(3, 0).rng();
    let r = pair_chain_return_times(q, 500_000, DEFAULT_STEP_CAP, &mut rng).unwrap();
    let p1 = r.iter().filter(|&&x| x == 1).count() as f64 / r.len() as f64;
    assert!((p1 - 0.25).abs() < 0.005, "{p1}");
    let s = sums(&r);
    let m = mu0(q).powi(2);
    assert!((s.mean() * m - 1.0).abs() < 3.0 * s.std_error() * m, "{}", s.mean() * m);
    assert!(pair_chain_return_times(2.0, 1, 10, &mut rng).is_err());
}

#[test]
fn occupation_matches_stationary_law() {
    let q = 0.5;
    let law = stationary_mu(q, None, DEFAULT_TOL).unwrap();
    let occ = occupation_distribution(q, 2_000_000, 1000, &mut RngStream::new(4, 0).rng()).unwrap();
    assert!(tv_distance(&occ.pmf, &law.pmf) < 0.005);
    assert!((occ.pmf[0] - law.mu0()).abs() < 3.0 * occ.zero_std_error);
}

#[test]
fn covering_block_is_size_biased() {
    let exec = Executor::sequential();
    let cover = covering_block_length(0.5, 5000, 20_000, DEFAULT_STEP_CAP, &exec, RngStream::new(5, 0)).unwrap();
    let lengths = block_length_moments(0.5, 500_000, DEFAULT_STEP_CAP, &exec, RngStream::new(5, 1)).unwrap();
    assert!(cover.mean > lengths.mean() + 10.0 * cover.std_error);
    let (target, se) = lengths.size_bias_mean();
    let z = (cover.mean - target) / (cover.std_error.powi(2) + se.powi(2)).sqrt();
    assert!(z.abs() < 3.5, "{z}");
}

fn central_lengths(q: f64, n: usize, reps: usize, seed: u64) -> Vec<u64> {
    let mut rng = RngStream::new(seed, n as u64).rng();
    let h = sample_symmetric_blocks(q, n, reps, HarvestPolicy::default(), &mut rng).unwrap();
    assert_eq!(h.parity, Parity::of(n));
    assert!(h.pair_blocks.iter().all(|b| b.satisfies_invariants() && b.length() % 2 == 0));
    h.centrals.iter().map(|c| c.length() as u64).collect()
}

#[test]
fn central_block_law_stabilizes_within_parity() {
    let q = 2.0;
    for (a, b) in [(2001, 4001), (2000, 4000)] {
        let x = sums(&central_lengths(q, a, 4000, 6));
        let y = sums(&central_lengths(q, b, 4000, 7));
        let se = (x.std_error().powi(2) + y.std_error().powi(2)).sqrt();
        assert!((x.mean() - y.mean()).abs() < 3.5 * se, "{a} vs {b}: {} {}", x.mean(), y.mean());
    }
}

fn pair_lengths(n: usize, reps: usize) -> PowerSums {
    let mut rng = RngStream::new(10, n as u64).rng();
    let h = sample_symmetric_blocks(2.0, n, reps, HarvestPolicy::default(), &mut rng).unwrap();
    let mut s = PowerSums::default();
    h.pair_blocks.iter().for_each(|b| s.push(b.length() as u64));
    s
}

#[test]
fn pair_block_length_does_not_depend_on_ambient_size() {
    // about 1.6e5 blocks each; the O(1/n) window bias (about 0.15 here) shows up near 1e6 blocks
    let (a, b) = (pair_lengths(2001, 2000), pair_lengths(4001, 1000));
    let se = (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
    assert!((a.mean() - b.mean()).abs() < 3.0 * se, "{} vs {} (se {se})", a.mean(), b.mean());
    let far = pair_lengths(40001, 100);
    let limit = 2.0 / mu0(0.5).powi(2);
    assert!((far.mean() - limit).abs() < 3.0 * far.std_error(), "{} vs {limit}", far.mean());
}

#[test]
fn even_central_block_can_be_empty() {
    let even = central_lengths(2.0, 2000, 4000, 8);
    let empty = even.iter().filter(|&&l| l == 0).count();
    assert!(empty > 100, "{empty}");
    assert!(even.iter().all(|l| l % 2 == 0));
    let odd = central_lengths(2.0, 2001, 4000, 9);
    assert!(odd.iter().all(|l| l % 2 == 1));
}

#[test]
fn symmetric_blocks_need_q_above_one() {
    let mut rng = RngStream::new(1, 0).rng();
    assert!(sample_symmetric_blocks(0.5, 10, 1, HarvestPolicy::default(), &mut rng).is_err());
}
