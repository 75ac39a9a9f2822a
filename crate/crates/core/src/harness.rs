//! Empirical checks of the limit theorems: Gaussian shape, mean and variance
//! scaling, odd-cycle parity limits and size-bias convergence.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constants::{ConstantsReport, Regime};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::regen::{covering_block_length, block_length_moments, split_symmetric, HarvestPolicy};
use crate::rng::RngStream;
use crate::sampler::FiniteSampler;
use crate::statistic::BlockStatistic;
use crate::stats::{ks_normal_fitted, pooled_pmf, shape, tv_distance};

/// One cycle statistic: `C_i` or the total cycle count `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CycleStatistic {
    Length(usize),
    Total,
}

impl CycleStatistic {
    pub fn is_odd_cycle(self) -> bool {
        matches!(self, CycleStatistic::Length(i) if i % 2 == 1)
    }
}

impl fmt::Display for CycleStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleStatistic::Length(i) => write!(f, "C{i}"),
            CycleStatistic::Total => write!(f, "C"),
        }
    }
}

impl FromStr for CycleStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadStatistic(format!("expected C or C<i> with i >= 1, got {s:?}"));
        let rest = s.trim().strip_prefix('C').ok_or_else(bad)?;
        if rest.is_empty() {
            return Ok(CycleStatistic::Total);
        }
        match rest.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(CycleStatistic::Length(i)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for CycleStatistic {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CycleStatistic> for String {
    fn from(s: CycleStatistic) -> String {
        s.to_string()
    }
}

/// A list of cycle statistics evaluated together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSelection(pub Vec<CycleStatistic>);

impl BlockStatistic for CycleSelection {
    fn names(&self) -> Vec<String> {
        self.0.iter().map(|s| s.to_string()).collect()
    }

    fn dim(&self) -> usize {
        self.0.len()
    }

    fn evaluate(&self, image: &[usize], out: &mut [i64]) {
        let counts = crate::perm::cycle_counts_of(image);
        for (o, s) in out.iter_mut().zip(&self.0) {
            *o = match *s {
                CycleStatistic::Length(i) => counts.get(i) as i64,
                CycleStatistic::Total => counts.total() as i64,
            };
        }
    }
}

/// Evaluates `stat` on `reps` independent Mallows(n, q) samples. Rows are
/// returned in a fixed order that does not depend on the worker count.
pub fn sample_statistic_rows(
    q: f64,
    n: usize,
    reps: u64,
    stat: &dyn BlockStatistic,
    exec: &Executor,
    stream: RngStream,
) -> Result<Vec<Vec<i64>>> {
    let sampler = FiniteSampler::new(n, q)?;
    let dim = stat.dim();
    let parts = exec.map_chunks(reps, stream, |_, share, s| {
        let mut rng = s.rng();
        (0..share)
            .map(|_| {
                let w = sampler.sample(&mut rng);
                let mut row = vec![0; dim];
                stat.evaluate(w.as_slice(), &mut row);
                row
            })
            .collect::<Vec<_>>()
    });
    Ok(parts.into_iter().flatten().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeThresholds {
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
    /// Fewer replicates than this never produce a pass.
    pub min_reps: usize,
}

impl Default for ShapeThresholds {
    fn default() -> Self {
        ShapeThresholds {
            skewness: 0.1,
            excess_kurtosis: 0.2,
            ks: 0.02,
            min_reps: 1000,
        }
    }
}

/// Gaussian-shape summary of one standardized statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub statistic: String,
    pub n: usize,
    pub reps: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub ks: f64,
    pub thresholds: ShapeThresholds,
    pub skewness_pass: bool,
    pub kurtosis_pass: bool,
    pub ks_pass: bool,
    pub passed: bool,
}

impl NormalityReport {
    pub fn from_values(statistic: &str, n: usize, values: &[f64], thresholds: ShapeThresholds) -> Self {
        let (mean, variance) = crate::stats::mean_var(values);
        let (skewness, excess_kurtosis) = shape(values);
        let ks = ks_normal_fitted(values);
        let enough = values.len() >= thresholds.min_reps;
        let skewness_pass = skewness.abs() < thresholds.skewness;
        let kurtosis_pass = excess_kurtosis.abs() < thresholds.excess_kurtosis;
        let ks_pass = ks < thresholds.ks;
        NormalityReport {
            statistic: statistic.to_string(),
            n,
            reps: values.len(),
            mean,
            variance,
            skewness,
            excess_kurtosis,
            ks,
            thresholds,
            skewness_pass,
            kurtosis_pass,
            ks_pass,
            passed: enough && skewness_pass && kurtosis_pass && ks_pass,
        }
    }
}

/// Shape checks for each requested statistic plus the empirical `Cov / n` matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub q: f64,
    pub n: usize,
    pub reps: usize,
    pub statistics: Vec<CycleStatistic>,
    pub normality: Vec<NormalityReport>,
    pub mean_over_n: Vec<f64>,
    pub cov_over_n: Vec<Vec<f64>>,
    /// Delta-method standard errors of `cov_over_n`.
    pub cov_over_n_se: Vec<Vec<f64>>,
    pub seed: u64,
    pub stream_id: u64,
    pub worker_count: usize,
}

impl CltReport {
    pub fn passed(&self) -> bool {
        self.normality.iter().all(|r| r.passed)
    }

    pub fn index_of(&self, s: CycleStatistic) -> Option<usize> {
        self.statistics.iter().position(|&t| t == s)
    }
}

fn check_statistics(q: f64, stats: &[CycleStatistic]) -> Result<()> {
    if q > 1.0 {
        if let Some(s) = stats.iter().find(|s| s.is_odd_cycle()) {
            return Err(Error::BadStatistic(format!(
                "{s} counts odd cycles, which have no Gaussian limit for q > 1"
            )));
        }
    }
    if stats.is_empty() {
        return Err(Error::BadStatistic("no statistics requested".into()));
    }
    Ok(())
}

/// Sample covariance with the standard error `sqrt((m22 - c^2) / reps)`.
fn cov_with_se(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut c = 0.0;
    let mut m22 = 0.0;
    for (a, b) in x.iter().zip(y) {
        let p = (a - mx) * (b - my);
        c += p;
        m22 += p * p;
    }
    let cov = c / (n - 1.0);
    let m22 = m22 / n;
    (cov, ((m22 - cov * cov).max(0.0) / n).sqrt())
}

pub fn clt_check(
    q: f64,
    n: usize,
    reps: u64,
    statistics: &[CycleStatistic],
    thresholds: ShapeThresholds,
    exec: &Executor,
    stream: RngStream,
) -> Result<CltReport> {
    if q == 1.0 {
        return Err(Error::BadParameter("clt_check needs q != 1".into()));
    }
    check_statistics(q, statistics)?;
    let sel = CycleSelection(statistics.to_vec());
    let rows = sample_statistic_rows(q, n, reps, &sel, exec, stream)?;
    let d = statistics.len();
    let columns: Vec<Vec<f64>> = (0..d)
        .map(|k| rows.iter().map(|r| r[k] as f64).collect())
        .collect();
    let nf = n as f64;
    let normality = statistics
        .iter()
        .zip(&columns)
        .map(|(s, col)| NormalityReport::from_values(&s.to_string(), n, col, thresholds))
        .collect();
    let mean_over_n = columns
        .iter()
        .map(|c| c.iter().sum::<f64>() / c.len() as f64 / nf)
        .collect();
    let mut cov_over_n = vec![vec![0.0; d]; d];
    let mut cov_over_n_se = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let (c, se) = cov_with_se(&columns[i], &columns[j]);
            cov_over_n[i][j] = c / nf;
            cov_over_n[j][i] = c / nf;
            cov_over_n_se[i][j] = se / nf;
            cov_over_n_se[j][i] = se / nf;
        }
    }
    Ok(CltReport {
        q,
        n,
        reps: rows.len(),
        statistics: statistics.to_vec(),
        normality,
        mean_over_n,
        cov_over_n,
        cov_over_n_se,
        seed: stream.seed,
        stream_id: stream.stream_id,
        worker_count: exec.workers(),
    })
}

/// An empirical quantity compared against an estimated limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub label: String,
    pub empirical: f64,
    pub empirical_se: f64,
    pub reference: f64,
    pub reference_se: f64,
    /// `|empirical - reference| / combined SE`.
    pub z: f64,
    pub max_z: f64,
    pub passed: bool,
}

impl Agreement {
    pub fn new(label: &str, empirical: (f64, f64), reference: (f64, f64), max_z: f64) -> Self {
        let combined = (empirical.1.powi(2) + reference.1.powi(2)).sqrt();
        let z = (empirical.0 - reference.0).abs() / combined;
        Agreement {
            label: label.to_string(),
            empirical: empirical.0,
            empirical_se: empirical.1,
            reference: reference.0,
            reference_se: reference.1,
            z,
            max_z,
            passed: z < max_z || empirical.0 == reference.0,
        }
    }
}

fn constants_index(report: &ConstantsReport, s: CycleStatistic) -> Option<usize> {
    let i = match s {
        CycleStatistic::Length(i) => i,
        CycleStatistic::Total => return None,
    };
    let k = match report.regime {
        Regime::Renewal => i.checked_sub(1)?,
        Regime::Symmetric if i % 2 == 0 => i / 2 - 1,
        Regime::Symmetric => return None,
    };
    (k < report.alpha.len()).then_some(k)
}

/// `(beta, SE)` for a pair of statistics, when the report covers them.
pub fn beta_entry(report: &ConstantsReport, a: CycleStatistic, b: CycleStatistic) -> Option<(f64, f64)> {
    if a == CycleStatistic::Total && b == CycleStatistic::Total {
        return Some((report.beta_total, report.standard_errors.beta_total));
    }
    let (i, j) = (constants_index(report, a)?, constants_index(report, b)?);
    Some((report.beta[i][j], report.standard_errors.beta[i][j]))
}

/// `(alpha, SE)` for one statistic, when the report covers it.
pub fn alpha_entry(report: &ConstantsReport, s: CycleStatistic) -> Option<(f64, f64)> {
    if s == CycleStatistic::Total {
        return Some((report.alpha_total, report.standard_errors.alpha_total));
    }
    let i = constants_index(report, s)?;
    Some((report.alpha[i], report.standard_errors.alpha[i]))
}

/// Empirical `Cov / n` against the renewal-representation `beta` for every
/// pair of statistics covered by both reports.
pub fn compare_covariances(clt: &CltReport, constants: &ConstantsReport, max_z: f64) -> Vec<Agreement> {
    let mut out = Vec::new();
    for (a, &sa) in clt.statistics.iter().enumerate() {
        for (b, &sb) in clt.statistics.iter().enumerate().skip(a) {
            if let Some(reference) = beta_entry(constants, sa, sb) {
                out.push(Agreement::new(
                    &format!("cov({sa},{sb})/n"),
                    (clt.cov_over_n[a][b], clt.cov_over_n_se[a][b]),
                    reference,
                    max_z,
                ));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub reps: usize,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
}

impl ScalingRow {
    fn scaled(&self, by: f64) -> ScalingRow {
        ScalingRow {
            n: self.n,
            reps: self.reps,
            mean: self.mean / by,
            mean_se: self.mean_se / by,
            variance: self.variance / by,
            variance_se: self.variance_se / by,
        }
    }
}

/// Mean and variance of one statistic across sizes, raw and divided by `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub q: f64,
    pub statistic: CycleStatistic,
    pub raw: Vec<ScalingRow>,
    pub per_n: Vec<ScalingRow>,
    pub seed: u64,
    pub stream_id: u64,
    pub worker_count: usize,
}

impl ScalingTable {
    /// Agreement of the two largest sizes, on the raw or per-`n` scale.
    pub fn stabilization(&self, per_n: bool, max_z: f64) -> Vec<Agreement> {
        let rows = if per_n { &self.per_n } else { &self.raw };
        let tag = if per_n { "/n" } else { "" };
        if rows.len() < 2 {
            return Vec::new();
        }
        let (a, b) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
        vec![
            Agreement::new(
                &format!("mean{tag} n={} vs n={}", a.n, b.n),
                (b.mean, b.mean_se),
                (a.mean, a.mean_se),
                max_z,
            ),
            Agreement::new(
                &format!("var{tag} n={} vs n={}", a.n, b.n),
                (b.variance, b.variance_se),
                (a.variance, a.variance_se),
                max_z,
            ),
        ]
    }
}

/// Mean and variance with delta-method standard errors.
pub fn mean_variance_with_se(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let (mean, var) = crate::stats::mean_var(values);
    let m4 = values.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let var_se = ((m4 - var * var).max(0.0) / n).sqrt();
    (mean, (var / n).sqrt(), var, var_se)
}

pub fn mean_variance_scaling(
    q: f64,
    sizes: &[usize],
    reps: u64,
    statistic: CycleStatistic,
    exec: &Executor,
    stream: RngStream,
) -> Result<ScalingTable> {
    if q == 1.0 {
        return Err(Error::BadParameter("scaling needs q != 1".into()));
    }
    let sel = CycleSelection(vec![statistic]);
    let mut raw = Vec::with_capacity(sizes.len());
    for (k, &n) in sizes.iter().enumerate() {
        let rows = sample_statistic_rows(q, n, reps, &sel, exec, stream.child(k as u64))?;
        let values: Vec<f64> = rows.iter().map(|r| r[0] as f64).collect();
        let (mean, mean_se, variance, variance_se) = mean_variance_with_se(&values);
        raw.push(ScalingRow {
            n,
            reps: values.len(),
            mean,
            mean_se,
            variance,
            variance_se,
        });
    }
    let per_n = raw.iter().map(|r| r.scaled(r.n.max(1) as f64)).collect();
    Ok(ScalingTable {
        q,
        statistic,
        raw,
        per_n,
        seed: stream.seed,
        stream_id: stream.stream_id,
        worker_count: exec.workers(),
    })
}

/// Pooled pmf of one odd cycle count at two sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddCyclePmf {
    pub cycle_length: usize,
    pub pmf_a: Vec<f64>,
    pub pmf_b: Vec<f64>,
    pub tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub q: f64,
    pub sizes: (usize, usize),
    pub same_parity: bool,
    pub reps: usize,
    /// Counts at or above this value share the last pmf cell.
    pub truncation: usize,
    pub pmfs: Vec<OddCyclePmf>,
    /// Mean of the total odd-cycle count at the two sizes.
    pub odd_total: Agreement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityCheck {
    pub same: ParityReport,
    pub adjacent: ParityReport,
    pub seed: u64,
    pub stream_id: u64,
    pub worker_count: usize,
}

pub const DEFAULT_PMF_TRUNCATION: usize = 10;

struct OddSample {
    columns: Vec<Vec<u64>>,
    odd_totals: Vec<f64>,
}

fn odd_sample(
    q: f64,
    n: usize,
    reps: u64,
    i_max: usize,
    exec: &Executor,
    stream: RngStream,
) -> Result<OddSample> {
    let sampler = FiniteSampler::new(n, q)?;
    let parts = exec.map_chunks(reps, stream, |_, share, s| {
        let mut rng = s.rng();
        (0..share)
            .map(|_| {
                let w = sampler.sample(&mut rng);
                let c = crate::perm::cycle_counts(&w);
                let row: Vec<u64> = (0..i_max).map(|i| c.get(2 * i + 1)).collect();
                (row, c.odd_total() as f64)
            })
            .collect::<Vec<_>>()
    });
    let rows: Vec<_> = parts.into_iter().flatten().collect();
    Ok(OddSample {
        columns: (0..i_max)
            .map(|k| rows.iter().map(|r| r.0[k]).collect())
            .collect(),
        odd_totals: rows.iter().map(|r| r.1).collect(),
    })
}

fn parity_report(q: f64, na: usize, a: &OddSample, nb: usize, b: &OddSample, truncation: usize) -> ParityReport {
    let pmfs = a
        .columns
        .iter()
        .zip(&b.columns)
        .enumerate()
        .map(|(i, (ca, cb))| {
            let pmf_a = pooled_pmf(ca.iter().copied(), truncation);
            let pmf_b = pooled_pmf(cb.iter().copied(), truncation);
            OddCyclePmf {
                cycle_length: 2 * i + 1,
                tv: tv_distance(&pmf_a, &pmf_b),
                pmf_a,
                pmf_b,
            }
        })
        .collect();
    let (ma, sa, _, _) = mean_variance_with_se(&a.odd_totals);
    let (mb, sb, _, _) = mean_variance_with_se(&b.odd_totals);
    ParityReport {
        q,
        sizes: (na, nb),
        same_parity: (na + nb).is_multiple_of(2),
        reps: a.odd_totals.len(),
        truncation,
        pmfs,
        odd_total: Agreement::new(&format!("odd cycles n={na} vs n={nb}"), (mb, sb), (ma, sa), 3.0),
    }
}

/// Odd-cycle pmfs at `n` against `n + 2` (same parity) and `n + 1`.
pub fn parity_limit_check(
    q: f64,
    n: usize,
    reps: u64,
    i_max: usize,
    exec: &Executor,
    stream: RngStream,
) -> Result<ParityCheck> {
    if q <= 1.0 {
        return Err(Error::BadParameter(format!("parity limits need q > 1, got {q}")));
    }
    if i_max == 0 {
        return Err(Error::BadParameter("i_max must be at least 1".into()));
    }
    let base = odd_sample(q, n, reps, i_max, exec, stream.child(0))?;
    let plus2 = odd_sample(q, n + 2, reps, i_max, exec, stream.child(2))?;
    let plus1 = odd_sample(q, n + 1, reps, i_max, exec, stream.child(1))?;
    Ok(ParityCheck {
        same: parity_report(q, n, &base, n + 2, &plus2, DEFAULT_PMF_TRUNCATION),
        adjacent: parity_report(q, n, &base, n + 1, &plus1, DEFAULT_PMF_TRUNCATION),
        seed: stream.seed,
        stream_id: stream.stream_id,
        worker_count: exec.workers(),
    })
}

/// Pooled pmf of `C_len` over the central blocks of Mallows(n, q) samples, `q > 1`.
pub fn central_block_pmf(
    q: f64,
    n: usize,
    reps: u64,
    cycle_length: usize,
    truncation: usize,
    exec: &Executor,
    stream: RngStream,
) -> Result<Vec<f64>> {
    if q <= 1.0 {
        return Err(Error::BadParameter(format!("central blocks need q > 1, got {q}")));
    }
    let sampler = FiniteSampler::new(n, q)?;
    let parts = exec.map_chunks(reps, stream, |_, share, s| {
        let mut rng = s.rng();
        (0..share)
            .map(|_| {
                let w = sampler.sample(&mut rng);
                let central = split_symmetric(&w, HarvestPolicy::default()).central;
                crate::perm::cycle_counts(&central.block).get(cycle_length)
            })
            .collect::<Vec<_>>()
    });
    Ok(pooled_pmf(parts.into_iter().flatten(), truncation))
}

pub fn odd_cycle_pmf(
    q: f64,
    n: usize,
    reps: u64,
    cycle_length: usize,
    truncation: usize,
    exec: &Executor,
    stream: RngStream,
) -> Result<Vec<f64>> {
    let sel = CycleSelection(vec![CycleStatistic::Length(cycle_length)]);
    let rows = sample_statistic_rows(q, n, reps, &sel, exec, stream)?;
    Ok(pooled_pmf(rows.iter().map(|r| r[0] as u64), truncation))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBiasRow {
    pub n: usize,
    pub covering_mean: f64,
    pub covering_se: f64,
    pub gap: f64,
    pub gap_se: f64,
}

/// Mean length of the block covering `n` against the size-biased mean `E(L^2)/E(L)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBiasTable {
    pub q: f64,
    /// `T` for `q < 1`, `S` for `q > 1`.
    pub block: String,
    pub block_mean: f64,
    pub block_mean_se: f64,
    pub size_biased_mean: f64,
    pub size_biased_se: f64,
    pub length_samples: u64,
    pub rows: Vec<SizeBiasRow>,
    /// The last gap is no larger than the first, up to 3 combined SE.
    pub non_increasing: bool,
    pub final_agreement: Agreement,
    pub seed: u64,
    pub stream_id: u64,
    pub worker_count: usize,
}

pub fn size_bias_convergence(
    q: f64,
    sizes: &[usize],
    reps: u64,
    length_samples: u64,
    cap: u64,
    exec: &Executor,
    stream: RngStream,
) -> Result<SizeBiasTable> {
    if sizes.is_empty() {
        return Err(Error::BadParameter("need at least one size".into()));
    }
    let lengths = block_length_moments(q, length_samples, cap, exec, stream.child(0))?;
    let (target, target_se) = lengths.size_bias_mean();
    let mut rows = Vec::with_capacity(sizes.len());
    for (k, &n) in sizes.iter().enumerate() {
        let cover = covering_block_length(q, n as u64, reps, cap, exec, stream.child(k as u64 + 1))?;
        rows.push(SizeBiasRow {
            n,
            covering_mean: cover.mean,
            covering_se: cover.std_error,
            gap: cover.mean - target,
            gap_se: (cover.std_error.powi(2) + target_se.powi(2)).sqrt(),
        });
    }
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let non_increasing =
        last.gap.abs() <= first.gap.abs() + 3.0 * (first.gap_se.powi(2) + last.gap_se.powi(2)).sqrt();
    let final_agreement = Agreement::new(
        &format!("covering block at n={}", last.n),
        (last.covering_mean, last.covering_se),
        (target, target_se),
        3.0,
    );
    Ok(SizeBiasTable {
        q,
        block: if q < 1.0 { "T".into() } else { "S".into() },
        block_mean: lengths.mean(),
        block_mean_se: lengths.std_error(),
        size_biased_mean: target,
        size_biased_se: target_se,
        length_samples: lengths.count,
        rows,
        non_increasing,
        final_agreement,
        seed: stream.seed,
        stream_id: stream.stream_id,
        worker_count: exec.workers(),
    })
}

/// The shape thresholds applied to known laws: normal draws should pass and
/// exponential draws should fail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaTest {
    pub normal: NormalityReport,
    pub exponential: NormalityReport,
    pub passed: bool,
}

pub fn threshold_meta_test(reps: usize, thresholds: ShapeThresholds, stream: RngStream) -> MetaTest {
    let mut rng = stream.rng();
    let normal: Vec<f64> = (0..reps).map(|_| StandardNormal.sample(&mut rng)).collect();
    let exponential: Vec<f64> = (0..reps).map(|_| Exp1.sample(&mut rng)).collect();
    let normal = NormalityReport::from_values("normal", 0, &normal, thresholds);
    let exponential = NormalityReport::from_values("exponential", 0, &exponential, thresholds);
    MetaTest {
        passed: normal.passed && !exponential.passed,
        normal,
        exponential,
    }
}

/// Draws from a standard normal, for callers that need reference samples.
pub fn normal_draws<R: Rng>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| StandardNormal.sample(rng)).collect()
}
