//! Monte Carlo bookkeeping: exact integer sufficient statistics that merge
//! associatively, plus the handful of distributional summaries the harness uses.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::rng::RngStream;

/// A Monte Carlo estimate of a scalar mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub label: String,
    pub samples: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub seed: u64,
    pub stream_id: u64,
}

impl EstimateReport {
    pub fn from_values(label: &str, values: &[f64], stream: RngStream) -> Self {
        let (mean, variance) = mean_var(values);
        EstimateReport {
            label: label.to_string(),
            samples: values.len() as u64,
            mean,
            variance,
            std_error: (variance / values.len() as f64).sqrt(),
            seed: stream.seed,
            stream_id: stream.stream_id,
        }
    }
}

/// Sums and cross products of integer vectors, kept exactly in `i128`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossMoments {
    dim: usize,
    count: u64,
    sum: Vec<i128>,
    // row-major dim x dim
    cross: Vec<i128>,
}

impl CrossMoments {
    pub fn new(dim: usize) -> Self {
        CrossMoments {
            dim,
            count: 0,
            sum: vec![0; dim],
            cross: vec![0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: &[i64]) {
        assert_eq!(x.len(), self.dim);
        self.count += 1;
        for i in 0..self.dim {
            let xi = x[i] as i128;
            self.sum[i] += xi;
            let row = &mut self.cross[i * self.dim..(i + 1) * self.dim];
            for (c, &xj) in row.iter_mut().zip(x) {
                *c += xi * xj as i128;
            }
        }
    }

    pub fn merge(&mut self, other: &CrossMoments) {
        assert_eq!(self.dim, other.dim);
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.cross.iter_mut().zip(&other.cross) {
            *a += b;
        }
    }

    pub fn sum(&self, i: usize) -> i128 {
        self.sum[i]
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.sum[i] as f64 / self.count as f64
    }

    /// Unbiased sample covariance of components `i` and `j`.
    pub fn cov(&self, i: usize, j: usize) -> f64 {
        let n = self.count as i128;
        if n < 2 {
            return f64::NAN;
        }
        let num = n * self.cross[i * self.dim + j] - self.sum[i] * self.sum[j];
        num as f64 / (n * (n - 1)) as f64
    }
}

/// Raw power sums `sum x^k`, `k = 1..=4`, of nonnegative integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSums {
    pub count: u64,
    pub sums: [u128; 4],
}

impl PowerSums {
    pub fn push(&mut self, x: u64) {
        let x = x as u128;
        self.count += 1;
        let mut p = 1u128;
        for s in self.sums.iter_mut() {
            p *= x;
            *s += p;
        }
    }

    pub fn merge(&mut self, other: &PowerSums) {
        self.count += other.count;
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a += b;
        }
    }

    /// `E(X^k)` estimate, `k` in `1..=4`.
    pub fn raw_moment(&self, k: usize) -> f64 {
        self.sums[k - 1] as f64 / self.count as f64
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    pub fn variance(&self) -> f64 {
        let n = self.count as i128;
        let num = n * self.sums[1] as i128 - (self.sums[0] as i128) * (self.sums[0] as i128);
        num as f64 / (n * (n - 1)) as f64
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }

    /// `E(X^2)/E(X)` and its delta-method standard error.
    pub fn size_bias_mean(&self) -> (f64, f64) {
        let n = self.count as f64;
        let m1 = self.raw_moment(1);
        let m2 = self.raw_moment(2);
        let m3 = self.raw_moment(3);
        let m4 = self.raw_moment(4);
        let ratio = m2 / m1;
        // gradient of m2/m1 is (-m2/m1^2, 1/m1); covariance of (X, X^2)
        let v11 = m2 - m1 * m1;
        let v22 = m4 - m2 * m2;
        let v12 = m3 - m1 * m2;
        let g1 = -m2 / (m1 * m1);
        let g2 = 1.0 / m1;
        let var = g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22;
        (ratio, (var / n).sqrt())
    }
}

pub fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Standard error of a mean from batch estimates.
pub fn batch_std_error(estimates: &[f64]) -> f64 {
    let (_, var) = mean_var(estimates);
    (var / estimates.len() as f64).sqrt()
}

/// Sample skewness and excess kurtosis (moment estimators).
pub fn shape(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Kolmogorov-Smirnov distance between the empirical law of `values` and a
/// normal with the sample mean and variance. Ties are handled exactly.
pub fn ks_normal_fitted(values: &[f64]) -> f64 {
    let (mean, var) = mean_var(values);
    let sd = var.sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = normal_cdf((x - mean) / sd);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

/// Total-variation distance between two pmfs on a common indexing.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|k| (at(p, k) - at(q, k)).abs()).sum::<f64>()
}

/// Empirical pmf of nonnegative integer values, with everything `>= cap` pooled into the last cell.
pub fn pooled_pmf(values: impl IntoIterator<Item = u64>, cap: usize) -> Vec<f64> {
    let mut counts = vec![0u64; cap + 1];
    let mut n = 0u64;
    for v in values {
        counts[(v as usize).min(cap)] += 1;
        n += 1;
    }
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Cells with expected count below the pooling threshold, merged into one.
    pub pooled_cells: usize,
}

/// Pearson goodness-of-fit of observed counts against probabilities.
///
/// Cells whose expected count is below `min_expected` are pooled into a single cell.
pub fn chi_square_gof(observed: &[u64], probs: &[f64], min_expected: f64) -> ChiSquareResult {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pool_obs, mut pool_exp, mut pooled) = (0.0, 0.0, 0usize);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * total;
        if e < min_expected {
            pool_obs += o as f64;
            pool_exp += e;
            pooled += 1;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pooled > 0 && pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp;
        cells += 1;
    }
    let dof = cells.saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64).map(|d| d.sf(stat)).unwrap_or(f64::NAN);
    ChiSquareResult {
        statistic: stat,
        degrees_of_freedom: dof,
        p_value,
        pooled_cells: pooled,
    }
}

/// Two-sample chi-square homogeneity test on count histograms.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquareResult {
    let len = a.len().max(b.len());
    let at = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(0) as f64;
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    let (mut stat, mut cells) = (0.0, 0usize);
    for k in 0..len {
        let (x, y) = (at(a, k), at(b, k));
        if x + y == 0.0 {
            continue;
        }
        let ea = (x + y) * na / (na + nb);
        let eb = (x + y) * nb / (na + nb);
        stat += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
        cells += 1;
    }
    let dof = cells.saturating_sub(1).max(1);
    let p_value = ChiSquared::new(dof as f64).map(|d| d.sf(stat)).unwrap_or(f64::NAN);
    ChiSquareResult {
        statistic: stat,
        degrees_of_freedom: dof,
        p_value,
        pooled_cells: 0,
    }
}
