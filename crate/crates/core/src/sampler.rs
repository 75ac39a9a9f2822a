//! Random generation: geometric driving variables, finite Mallows samples for
//! any `q > 0`, and the one-sided Mallows process on the positive integers.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fenwick::OrderStatTree;
use crate::perm::{relative_order_distinct, MallowsParams, Permutation};

fn check_sub_unit(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("q must lie in (0, 1), got {q}")))
    }
}

/// `k >= 1` with `P(k) = q^(k-1) (1 - q)`, by inversion of the closed-form CDF.
pub fn geometric<R: Rng + ?Sized>(q: f64, rng: &mut R) -> Result<u64> {
    check_sub_unit(q)?;
    Ok(geometric_ln(q.ln(), rng))
}

/// Geometric draw given `ln q < 0`.
#[inline]
pub(crate) fn geometric_ln<R: Rng + ?Sized>(ln_q: f64, rng: &mut R) -> u64 {
    // 1 - u lies in (0, 1], so the logarithm is finite
    let u = 1.0 - rng.random::<f64>();
    let x = (u.ln() / ln_q).floor();
    // `as` saturates for huge or non-finite x
    (x as u64).saturating_add(1)
}

/// `k` in `1..=m` with `P(k)` proportional to `r^(k-1)`, for `0 < r < 1`.
#[inline]
fn truncated_geometric_ln<R: Rng + ?Sized>(ln_r: f64, m: usize, rng: &mut R) -> usize {
    let mass = -((m as f64) * ln_r).exp_m1();
    let u = rng.random::<f64>();
    let x = ((-u * mass).ln_1p() / ln_r).floor();
    ((x as usize).saturating_add(1)).min(m)
}

/// Draws the rank of the next value among the `m` unused ones, weights `q^(k-1)`.
#[derive(Clone, Copy, Debug)]
enum RankLaw {
    Uniform,
    Decreasing { ln_r: f64 },
    // q > 1: mirror of the decreasing law with r = 1/q
    Increasing { ln_r: f64 },
}

impl RankLaw {
    fn new(q: f64) -> Self {
        if q == 1.0 {
            RankLaw::Uniform
        } else if q < 1.0 {
            RankLaw::Decreasing { ln_r: q.ln() }
        } else {
            RankLaw::Increasing { ln_r: -q.ln() }
        }
    }

    #[inline]
    fn draw<R: Rng + ?Sized>(self, m: usize, rng: &mut R) -> usize {
        match self {
            RankLaw::Uniform => rng.random_range(1..=m),
            RankLaw::Decreasing { ln_r } => truncated_geometric_ln(ln_r, m, rng),
            RankLaw::Increasing { ln_r } => m + 1 - truncated_geometric_ln(ln_r, m, rng),
        }
    }
}

/// Finite Mallows sampler by truncated-geometric insertion.
///
/// Position `i` receives the `k`-th smallest unused value with probability
/// proportional to `q^(k-1)`, which contributes exactly `k - 1` inversions.
#[derive(Clone, Debug)]
pub struct FiniteSampler {
    n: usize,
    law: RankLaw,
}

impl FiniteSampler {
    pub fn new(n: usize, q: f64) -> Result<Self> {
        let q = MallowsParams::new(q)?.q();
        Ok(FiniteSampler {
            n,
            law: RankLaw::new(q),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let n = self.n;
        let mut unused = OrderStatTree::full(n);
        let mut image = Vec::with_capacity(n);
        for i in 0..n {
            let k = self.law.draw(n - i, rng);
            let v = unused.kth(k as i64);
            unused.add(v, -1);
            image.push(v);
        }
        Permutation::from_vec_unchecked(image)
    }
}

/// One Mallows(n, q) permutation.
pub fn sample_finite<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Result<Permutation> {
    Ok(FiniteSampler::new(n, q)?.sample(rng))
}

/// One step of the Mallows process together with its geometric driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProcessStep {
    pub value: usize,
    /// The geometric variable `Z` that chose `value`.
    pub driver: u64,
    /// `M_t = max(values so far) - t` after this step.
    pub chain: u64,
}

impl ProcessStep {
    pub fn is_renewal(&self) -> bool {
        self.chain == 0
    }
}

/// The one-sided Mallows process `w(1), w(2), ...` on the positive integers, for `q < 1`.
///
/// `w(t + 1)` is the `k`-th smallest unused positive integer with
/// `P(k) = q^(k-1)(1 - q)`. Memory is proportional to the current excursion.
pub struct MallowsProcess<R> {
    rng: R,
    ln_q: f64,
    t: usize,
    max: usize,
    // every value in 1..=base is used; `base` is the last renewal time
    base: usize,
    // used flags of base+1 ..= base+len
    used: OrderStatTree,
    // values of the excursion in progress
    block: Vec<usize>,
}

impl<R: Rng> MallowsProcess<R> {
    pub fn new(q: f64, rng: R) -> Result<Self> {
        check_sub_unit(q)?;
        Ok(MallowsProcess {
            rng,
            ln_q: q.ln(),
            t: 0,
            max: 0,
            base: 0,
            used: OrderStatTree::empty(16),
            block: Vec::new(),
        })
    }

    pub fn time(&self) -> usize {
        self.t
    }

    /// Length of the excursion in progress.
    pub fn open_len(&self) -> usize {
        self.t - self.base
    }

    pub fn step(&mut self) -> ProcessStep {
        let z = geometric_ln(self.ln_q, &mut self.rng);
        self.step_with(z)
    }

    /// Advances using a supplied driver `z >= 1`.
    pub fn step_with(&mut self, z: u64) -> ProcessStep {
        debug_assert!(z >= 1);
        let m = (self.max - self.t) as u64;
        let value = if z <= m {
            // a gap below the running maximum
            self.base + self.used.kth_absent(z as i64)
        } else {
            self.t + z as usize
        };
        let offset = value - self.base;
        if offset > self.used.len() {
            self.grow(offset);
        }
        self.used.add(offset, 1);
        self.block.push(value);
        self.t += 1;
        self.max = self.max.max(value);
        let chain = (self.max - self.t) as u64;
        if chain == 0 {
            for &v in &self.block {
                self.used.add(v - self.base, -1);
            }
            self.block.clear();
            self.base = self.t;
        }
        ProcessStep {
            value,
            driver: z,
            chain,
        }
    }

    fn grow(&mut self, needed: usize) {
        let len = needed.next_power_of_two().max(2 * self.used.len());
        let mut used = OrderStatTree::empty(len);
        for &v in &self.block {
            used.add(v - self.base, 1);
        }
        self.used = used;
    }

    /// Runs to the next renewal and writes the excursion, relabeled to `1..=T`, into `out`.
    ///
    /// Must be called at a renewal time. Fails if the excursion exceeds `cap` steps.
    pub fn next_excursion_into(&mut self, out: &mut Vec<usize>, cap: u64) -> Result<()> {
        debug_assert_eq!(self.t, self.base);
        let start = self.base;
        out.clear();
        loop {
            let s = self.step();
            out.push(s.value - start);
            if s.is_renewal() {
                return Ok(());
            }
            if out.len() as u64 >= cap {
                return Err(Error::ExcursionTooLong { cap });
            }
        }
    }
}

/// A finite prefix `w(1..=t)` of the Mallows process, with its drivers.
#[derive(Clone, Debug, Serialize)]
pub struct ProcessPrefix {
    pub q: f64,
    pub values: Vec<usize>,
    pub drivers: Vec<u64>,
}

impl ProcessPrefix {
    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// Relative order of `w(a..=b)` (1-based, inclusive).
    pub fn relative_order(&self, a: usize, b: usize) -> Permutation {
        relative_order_distinct(&self.values[a - 1..b])
    }
}

pub fn sample_process_prefix<R: Rng>(q: f64, t: usize, rng: R) -> Result<ProcessPrefix> {
    if t == 0 {
        return Err(Error::BadParameter("horizon must be at least 1".into()));
    }
    let mut process = MallowsProcess::new(q, rng)?;
    let mut values = Vec::with_capacity(t);
    let mut drivers = Vec::with_capacity(t);
    for _ in 0..t {
        let s = process.step();
        values.push(s.value);
        drivers.push(s.driver);
    }
    Ok(ProcessPrefix { q, values, drivers })
}
