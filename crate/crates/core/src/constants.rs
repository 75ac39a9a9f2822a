//! Limiting constants of the cycle statistics.
//!
//! Closed forms: the q-Pochhammer symbol, the stationary law of the
//! running-maximum chain, and the fixed-point density series. Monte Carlo:
//! renewal-reward estimates of the mean and covariance rates from i.i.d.
//! regeneration blocks, for both `q < 1` (excursions) and `q > 1` (pair blocks).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{Executor, Plan};
use crate::regen::{split_symmetric, HarvestPolicy};
use crate::rng::RngStream;
use crate::sampler::{FiniteSampler, MallowsProcess};
use crate::statistic::{BlockStatistic, CycleProfile};
use crate::stats::{batch_std_error, CrossMoments};

pub const DEFAULT_TOL: f64 = 1e-14;
const MAX_SERIES_TERMS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QSeriesValue {
    pub value: f64,
    pub terms_used: usize,
    /// Bound on the absolute error from discarding the tail.
    pub truncation_bound: f64,
}

/// `(a; q)_r = prod_{i<r} (1 - a q^i)`; `r = None` is the infinite product.
pub fn q_pochhammer(a: f64, q: f64, r: Option<u64>, tol: f64) -> Result<QSeriesValue> {
    match r {
        Some(r) => {
            let mut value = 1.0;
            let mut x = a;
            for _ in 0..r {
                value *= 1.0 - x;
                x *= q;
            }
            Ok(QSeriesValue {
                value,
                terms_used: r as usize,
                truncation_bound: 0.0,
            })
        }
        None => {
            if q.abs() >= 1.0 {
                return Err(Error::Diverges(q.abs()));
            }
            let mut value = 1.0;
            let mut x = a;
            let mut i = 0;
            loop {
                value *= 1.0 - x;
                x *= q;
                i += 1;
                let next = x.abs();
                if next < 1.0 {
                    // |ln prod_{j>=i}(1 - a q^j)| <= |a q^i| / ((1 - |q|)(1 - |a q^i|))
                    let log_bound = next / ((1.0 - q.abs()) * (1.0 - next));
                    let rel = log_bound.exp_m1();
                    let bound = value.abs() * rel;
                    if rel <= tol.min(tol / value.abs()) || next == 0.0 {
                        return Ok(QSeriesValue {
                            value,
                            terms_used: i,
                            truncation_bound: bound,
                        });
                    }
                }
                if i >= MAX_SERIES_TERMS {
                    return Err(Error::BadParameter(format!(
                        "q-product did not reach tolerance {tol} in {i} terms"
                    )));
                }
            }
        }
    }
}

/// `(q; q)_infinity`.
pub fn euler_function(q: f64, tol: f64) -> Result<QSeriesValue> {
    q_pochhammer(q, q, None, tol)
}

/// Stationary law of the running-maximum chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryLaw {
    pub q: f64,
    /// `pmf[j] = (q;q)_inf q^j / (q;q)_j`.
    pub pmf: Vec<f64>,
    /// Bound on the mass beyond the last index.
    pub tail_bound: f64,
}

impl StationaryLaw {
    pub fn mu0(&self) -> f64 {
        self.pmf[0]
    }

    /// `sum_j j mu_j`, truncated at the stored support.
    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(j, p)| j as f64 * p).sum()
    }
}

/// `mu_j` proportional to `q^j / (q;q)_j`, normalized to a pmf.
///
/// The support runs to `j_max` when given, and otherwise until the remaining
/// mass is provably below `tol`.
pub fn stationary_mu(q: f64, j_max: Option<usize>, tol: f64) -> Result<StationaryLaw> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::BadParameter(format!("stationary law needs q in (0, 1), got {q}")));
    }
    let norm = euler_function(q, tol * 1e-3)?.value;
    let mut pmf = vec![norm];
    let mut q_pow = 1.0;
    loop {
        let j = pmf.len();
        // mu_j / mu_{j-1} = q / (1 - q^j)
        q_pow *= q;
        let next = pmf[j - 1] * q / (1.0 - q_pow);
        // ratios beyond j are at most q / (1 - q^(j+1))
        let r = q / (1.0 - q_pow * q);
        let tail_after = if r < 1.0 { next / (1.0 - r) } else { f64::INFINITY };
        let tail_bound = tail_after;
        let done = match j_max {
            Some(m) => j > m,
            None => tail_bound <= tol,
        };
        if done {
            return Ok(StationaryLaw {
                q,
                pmf,
                tail_bound,
            });
        }
        pmf.push(next);
        if pmf.len() > MAX_SERIES_TERMS {
            return Err(Error::BadParameter("stationary law support too large".into()));
        }
    }
}

/// Fixed-point density `alpha_1 = (1-q)/q (q;q)_inf sum_j q^((j+1)^2) / (q;q)_j^2`.
pub fn alpha1(q: f64, tol: f64) -> Result<QSeriesValue> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::BadParameter(format!("alpha1 needs q in (0, 1), got {q}")));
    }
    let euler = euler_function(q, tol * 1e-3)?;
    let prefactor = (1.0 - q) / q * euler.value;
    // term_j = q^((j+1)^2) / (q;q)_j^2
    let mut term = q;
    let mut sum = term;
    let mut q_pow = 1.0; // q^j
    let mut j = 0usize;
    loop {
        j += 1;
        q_pow *= q;
        let ratio = q.powi(2 * j as i32 + 1) / ((1.0 - q_pow) * (1.0 - q_pow));
        let next = term * ratio;
        if next < tol * sum || next == 0.0 {
            let next_ratio =
                q.powi(2 * j as i32 + 3) / ((1.0 - q_pow * q) * (1.0 - q_pow * q));
            let tail = if next_ratio < 1.0 {
                next / (1.0 - next_ratio)
            } else {
                f64::INFINITY
            };
            let value = prefactor * sum;
            let truncation_bound = prefactor * tail + sum * (1.0 - q) / q * euler.truncation_bound;
            return Ok(QSeriesValue {
                value,
                terms_used: j,
                truncation_bound,
            });
        }
        term = next;
        sum += term;
        if j >= MAX_SERIES_TERMS {
            return Err(Error::BadParameter("alpha1 series did not converge".into()));
        }
    }
}

/// Renewal-reward estimates from i.i.d. regeneration blocks.
///
/// With block length `L`, block statistic `f`, `mu = E(L)`:
/// `alpha_k = E(f_k)/mu` and
/// `beta_kl = Cov(f_k - alpha_k L, f_l - alpha_l L) / mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenewalEstimate {
    pub mu: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
}

impl RenewalEstimate {
    /// From cross moments of `(L, f_1, ..., f_d)`.
    pub fn from_moments(m: &CrossMoments) -> Self {
        let d = m.dim() - 1;
        let mu = m.mean(0);
        let alpha: Vec<f64> = (0..d).map(|k| m.mean(k + 1) / mu).collect();
        let var_l = m.cov(0, 0);
        let mut beta = vec![vec![0.0; d]; d];
        for k in 0..d {
            for l in k..d {
                let c = m.cov(k + 1, l + 1) - alpha[l] * m.cov(k + 1, 0) - alpha[k] * m.cov(0, l + 1)
                    + alpha[k] * alpha[l] * var_l;
                beta[k][l] = c / mu;
                beta[l][k] = c / mu;
            }
        }
        RenewalEstimate { mu, alpha, beta }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `q < 1`: excursions of the Mallows process.
    Renewal,
    /// `q > 1`: interior symmetric pair blocks.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardErrors {
    pub mu: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub beta_total: f64,
    pub alpha_total: f64,
}

/// Estimated limit constants with batch-means standard errors.
///
/// For the renewal regime `alpha[i-1]` estimates `alpha_i` (density of
/// `i`-cycles); for the symmetric regime it estimates `alpha'_i` (density of
/// `2i`-cycles). `beta_total` is the variance rate of the total cycle count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub q: f64,
    pub regime: Regime,
    pub statistic_names: Vec<String>,
    pub mu: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub alpha_total: f64,
    pub beta_total: f64,
    /// Rate of points lying on cycles longer than the tracked range.
    pub tail_point_rate: f64,
    pub standard_errors: StandardErrors,
    pub sample_count: u64,
    pub batches: usize,
    pub seed: u64,
    pub stream_id: u64,
    pub worker_count: usize,
    /// Ambient permutation size used to harvest symmetric blocks.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ambient_n: Option<usize>,
}

impl ConstantsReport {
    /// Smallest eigenvalue of the estimated `beta` matrix.
    pub fn beta_min_eigenvalue(&self) -> f64 {
        let d = self.beta.len();
        if d == 0 {
            return 0.0;
        }
        let m = DMatrix::from_fn(d, d, |i, j| self.beta[i][j]);
        SymmetricEigen::new(m)
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.beta.len();
        (0..d).all(|i| (0..d).all(|j| self.beta[i][j] == self.beta[j][i]))
    }
}

pub const DEFAULT_BATCHES: usize = 50;
pub const DEFAULT_I_MAX: usize = 10;
pub const DEFAULT_AMBIENT_N: usize = 100_000;

fn assemble_report(
    q: f64,
    regime: Regime,
    profile: &CycleProfile,
    batches: Vec<CrossMoments>,
    stream: RngStream,
    exec: &Executor,
    ambient_n: Option<usize>,
) -> ConstantsReport {
    let d = profile.i_max;
    let mut pooled = CrossMoments::new(batches[0].dim());
    for b in &batches {
        pooled.merge(b);
    }
    let summarize = |m: &CrossMoments| {
        let est = RenewalEstimate::from_moments(m);
        let total = profile.total_index();
        let alpha_total = est.alpha[total];
        let beta_total = est.beta[total][total];
        (est, alpha_total, beta_total)
    };
    let (est, alpha_total, beta_total) = summarize(&pooled);
    let per_batch: Vec<_> = batches.iter().map(summarize).collect();
    let se_of = |f: &dyn Fn(&(RenewalEstimate, f64, f64)) -> f64| {
        batch_std_error(&per_batch.iter().map(f).collect::<Vec<_>>())
    };
    let alpha_se = (0..d).map(|k| se_of(&|b| b.0.alpha[k])).collect();
    let beta_se = (0..d)
        .map(|k| (0..d).map(|l| se_of(&|b| b.0.beta[k][l])).collect())
        .collect();
    let standard_errors = StandardErrors {
        mu: se_of(&|b| b.0.mu),
        alpha: alpha_se,
        beta: beta_se,
        beta_total: se_of(&|b| b.2),
        alpha_total: se_of(&|b| b.1),
    };
    ConstantsReport {
        q,
        regime,
        statistic_names: profile.names()[..d].to_vec(),
        mu: est.mu,
        alpha: est.alpha[..d].to_vec(),
        beta: est.beta[..d].iter().map(|row| row[..d].to_vec()).collect(),
        alpha_total,
        beta_total,
        tail_point_rate: est.alpha[profile.tail_points_index()],
        standard_errors,
        sample_count: pooled.count(),
        batches: batches.len(),
        seed: stream.seed,
        stream_id: stream.stream_id,
        worker_count: exec.workers(),
        ambient_n,
    }
}

fn check_batches(batches: usize, samples: u64) -> Result<()> {
    if batches < 2 || samples < 2 * batches as u64 {
        return Err(Error::BadParameter(format!(
            "need at least 2 batches of 2 samples, got {samples} samples in {batches} batches"
        )));
    }
    Ok(())
}

/// Cross moments of `(T, f(w_1))` over excursions of the Mallows process.
pub fn excursion_moments(
    q: f64,
    num_excursions: u64,
    stat: &dyn BlockStatistic,
    cap: u64,
    exec: &Executor,
    stream: RngStream,
) -> Result<Vec<CrossMoments>> {
    let dim = stat.dim();
    let parts = exec.map_chunks(num_excursions, stream, |_, share, s| {
        let mut process = MallowsProcess::new(q, s.rng())?;
        let mut acc = CrossMoments::new(dim + 1);
        let mut buf = Vec::new();
        let mut row = vec![0i64; dim + 1];
        for _ in 0..share {
            process.next_excursion_into(&mut buf, cap)?;
            row[0] = buf.len() as i64;
            stat.evaluate(&buf, &mut row[1..]);
            acc.push(&row);
        }
        Ok::<_, Error>(acc)
    });
    parts.into_iter().collect()
}

/// Renewal-representation estimates of `mu`, `alpha_i`, `beta_ij`, `beta` for `q < 1`.
pub fn estimate_renewal_constants(
    q: f64,
    num_excursions: u64,
    i_max: usize,
    batches: usize,
    exec: &Executor,
    stream: RngStream,
) -> Result<ConstantsReport> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::BadParameter(format!("renewal constants need q in (0, 1), got {q}")));
    }
    if i_max == 0 {
        return Err(Error::BadParameter("i_max must be at least 1".into()));
    }
    check_batches(batches, num_excursions)?;
    let profile = CycleProfile::all(i_max);
    let exec = exec.with_plan(Plan::new(batches));
    let moments = excursion_moments(
        q,
        num_excursions,
        &profile,
        crate::regen::DEFAULT_STEP_CAP,
        &exec,
        stream,
    )?;
    Ok(assemble_report(q, Regime::Renewal, &profile, moments, stream, &exec, None))
}

/// Cross moments of `(S, f(v))` over interior pair blocks harvested from
/// Mallows(`ambient_n`, q) samples, `q > 1`.
pub fn pair_block_moments(
    q: f64,
    num_blocks: u64,
    ambient_n: usize,
    stat: &dyn BlockStatistic,
    policy: HarvestPolicy,
    exec: &Executor,
    stream: RngStream,
) -> Result<Vec<CrossMoments>> {
    let sampler = FiniteSampler::new(ambient_n, q)?;
    let dim = stat.dim();
    let parts = exec.map_chunks(num_blocks, stream, |_, share, s| {
        let mut rng = s.rng();
        let mut acc = CrossMoments::new(dim + 1);
        let mut row = vec![0i64; dim + 1];
        let mut attempts = 0u32;
        while acc.count() < share {
            let w = sampler.sample(&mut rng);
            let split = split_symmetric(&w, policy);
            if split.pairs.is_empty() {
                attempts += 1;
                if attempts > 1000 {
                    return Err(Error::BadParameter(format!(
                        "no interior pair blocks at n = {ambient_n}; increase the ambient size"
                    )));
                }
            }
            for b in split.pairs {
                if acc.count() == share {
                    break;
                }
                row[0] = b.length() as i64;
                stat.evaluate(b.block.as_slice(), &mut row[1..]);
                acc.push(&row);
            }
        }
        Ok(acc)
    });
    parts.into_iter().collect()
}

/// Symmetric-process estimates of `mu'`, `alpha'_i`, `beta'_ij`, `beta'` for `q > 1`.
pub fn estimate_symmetric_constants(
    q: f64,
    num_blocks: u64,
    i_max: usize,
    ambient_n: usize,
    batches: usize,
    exec: &Executor,
    stream: RngStream,
) -> Result<ConstantsReport> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::BadParameter(format!("symmetric constants need q > 1, got {q}")));
    }
    if i_max == 0 {
        return Err(Error::BadParameter("i_max must be at least 1".into()));
    }
    check_batches(batches, num_blocks)?;
    let profile = CycleProfile::even(i_max);
    let exec = exec.with_plan(Plan::new(batches));
    let moments = pair_block_moments(
        q,
        num_blocks,
        ambient_n,
        &profile,
        HarvestPolicy::default(),
        &exec,
        stream,
    )?;
    Ok(assemble_report(
        q,
        Regime::Symmetric,
        &profile,
        moments,
        stream,
        &exec,
        Some(ambient_n),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        let v = q_pochhammer(0.3, 0.5, Some(0), DEFAULT_TOL).unwrap();
        assert_eq!(v.value, 1.0);
        let v = q_pochhammer(0.5, 0.5, Some(2), DEFAULT_TOL).unwrap();
        assert!((v.value - 0.375).abs() < 1e-15);
        assert_eq!(
            q_pochhammer(0.5, 1.0, None, DEFAULT_TOL).unwrap_err(),
            Error::Diverges(1.0)
        );
        // finite r with |q| >= 1 is just a product
        assert!((q_pochhammer(0.5, 2.0, Some(2), 0.0).unwrap().value - 0.0).abs() < 1e-15);
    }

    #[test]
    fn infinite_product_matches_long_partial_products() {
        let inf = q_pochhammer(0.5, 0.5, None, DEFAULT_TOL).unwrap();
        assert!(inf.truncation_bound <= DEFAULT_TOL);
        for r in [60u64, 100, 200] {
            let part = q_pochhammer(0.5, 0.5, Some(r), 0.0).unwrap().value;
            assert!((part - inf.value).abs() < 1e-14);
        }
    }

    #[test]
    fn stationary_law_basics() {
        let law = stationary_mu(1e-12, None, 1e-14).unwrap();
        assert!((law.mu0() - 1.0).abs() < 1e-11);
        for q in [0.1, 0.5, 0.7, 0.9, 0.97] {
            let law = stationary_mu(q, None, 1e-13).unwrap();
            let mass: f64 = law.pmf.iter().sum();
            assert!((mass - 1.0).abs() < 1e-12, "q={q} mass={mass}");
            assert!(law.tail_bound <= 1e-13);
            // the exact ratio decides monotonicity
            for j in 0..law.pmf.len() - 1 {
                let ratio = q / (1.0 - q.powi(j as i32 + 1));
                assert_eq!(law.pmf[j + 1] < law.pmf[j], ratio < 1.0, "q={q} j={j}");
            }
        }
        let fixed = stationary_mu(0.5, Some(5), 1e-14).unwrap();
        assert_eq!(fixed.pmf.len(), 6);
        assert!(stationary_mu(1.0, None, 1e-14).is_err());
    }

    #[test]
    fn alpha1_limits_and_range() {
        let a = alpha1(1e-9, DEFAULT_TOL).unwrap();
        assert!((a.value - 1.0).abs() < 1e-8);
        for k in 1..100 {
            let q = 0.01 * k as f64;
            let a = alpha1(q, DEFAULT_TOL).unwrap();
            assert!(a.value > 0.0 && a.value < 1.0, "q={q}: {}", a.value);
        }
        assert!(alpha1(1.5, DEFAULT_TOL).is_err());
    }

    #[test]
    fn renewal_estimate_is_symmetric() {
        let mut m = CrossMoments::new(3);
        for row in [[1i64, 1, 1], [3, 0, 2], [2, 2, 1], [5, 1, 3]] {
            m.push(&row);
        }
        let e = RenewalEstimate::from_moments(&m);
        assert_eq!(e.beta[0][1], e.beta[1][0]);
        assert!((e.mu - 2.75).abs() < 1e-15);
    }
}
