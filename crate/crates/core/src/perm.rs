//! Permutations of `{1..n}` in one-line notation, together with the exact
//! pieces of the Mallows measure: inversion counts, cycle counts and the
//! normalizing constant.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{1..n}`. Position `i` (0-based in the slice) holds `w(i + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Validates that `image` is a permutation of `1..=image.len()`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::NotABijection { len: n });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { image })
    }

    /// Skips validation. Callers must guarantee the bijection invariant.
    pub(crate) fn from_vec_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(image.clone()).is_ok());
        Permutation { image }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (1..=n).collect(),
        }
    }

    /// The permutation `i -> n - i + 1`.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            image: (1..=n).rev().collect(),
        }
    }

    pub fn empty() -> Self {
        Permutation { image: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    /// `w(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    /// One-line notation joined by commas, e.g. `2,1,3`.
    pub fn one_line(&self) -> String {
        let mut s = String::with_capacity(self.len() * 3);
        for (k, v) in self.image.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&v.to_string());
        }
        s
    }

    /// Parses the comma-joined one-line notation produced by [`Permutation::one_line`].
    pub fn parse_one_line(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::empty());
        }
        let values = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::BadParameter(format!("cannot parse permutation {s:?}: {e}")))?;
        make_permutation(&values)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(w: Permutation) -> Self {
        w.image
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.one_line())
    }
}

/// Validating constructor from arbitrary integers.
pub fn make_permutation(values: &[i64]) -> Result<Permutation> {
    let n = values.len();
    let image = values
        .iter()
        .map(|&v| {
            if v >= 1 && (v as u64) <= n as u64 {
                Ok(v as usize)
            } else {
                Err(Error::NotABijection { len: n })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(image)
}

/// Number of cycles of each length, plus the total number of cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleCounts {
    // by_length[i - 1] = C_i; no trailing zeros.
    by_length: Vec<u64>,
    total: u64,
}

impl CycleCounts {
    pub fn new() -> Self {
        CycleCounts::default()
    }

    /// `C_i`; zero for lengths that do not occur.
    pub fn get(&self, len: usize) -> u64 {
        if len == 0 {
            return 0;
        }
        self.by_length.get(len - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `sum_i i * C_i`, the size of the underlying permutation.
    pub fn size(&self) -> u64 {
        self.by_length
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as u64 + 1) * c)
            .sum()
    }

    /// Longest cycle length present, or 0 when empty.
    pub fn max_length(&self) -> usize {
        self.by_length.len()
    }

    /// Sum of `C_i` over odd `i`.
    pub fn odd_total(&self) -> u64 {
        self.by_length.iter().step_by(2).sum()
    }

    pub fn record_cycle(&mut self, len: usize) {
        assert!(len >= 1);
        if self.by_length.len() < len {
            self.by_length.resize(len, 0);
        }
        self.by_length[len - 1] += 1;
        self.total += 1;
    }

    /// `(i, C_i)` for every length with `C_i > 0`, in increasing `i`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.by_length
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k + 1, c))
    }
}

impl AddAssign<&CycleCounts> for CycleCounts {
    fn add_assign(&mut self, rhs: &CycleCounts) {
        if self.by_length.len() < rhs.by_length.len() {
            self.by_length.resize(rhs.by_length.len(), 0);
        }
        for (a, b) in self.by_length.iter_mut().zip(&rhs.by_length) {
            *a += b;
        }
        self.total += rhs.total;
    }
}

#[derive(Serialize, Deserialize)]
struct CycleCountsRepr {
    counts: BTreeMap<usize, u64>,
    total: u64,
}

impl Serialize for CycleCounts {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycleCountsRepr {
            counts: self.iter().collect(),
            total: self.total,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycleCounts {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycleCountsRepr::deserialize(d)?;
        let mut out = CycleCounts::new();
        for (len, c) in repr.counts {
            if len == 0 {
                return Err(serde::de::Error::custom("cycle length 0"));
            }
            if out.by_length.len() < len {
                out.by_length.resize(len, 0);
            }
            out.by_length[len - 1] = c;
            out.total += c;
        }
        if out.total != repr.total {
            return Err(serde::de::Error::custom("total does not match counts"));
        }
        Ok(out)
    }
}

/// The Mallows parameter `q`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MallowsParams {
    q: f64,
}

impl MallowsParams {
    /// Any finite `q > 0`; `q = 1` is the uniform measure.
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(MallowsParams { q })
        } else {
            Err(Error::BadParameter(format!("q must be a finite positive real, got {q}")))
        }
    }

    /// Regenerative operations additionally need `q != 1`.
    pub fn non_uniform(q: f64) -> Result<Self> {
        let p = MallowsParams::new(q)?;
        if q == 1.0 {
            return Err(Error::BadParameter("q = 1 has no regenerative structure".into()));
        }
        Ok(p)
    }

    pub fn q(self) -> f64 {
        self.q
    }
}

/// Number of pairs `i < j` with `w(i) > w(j)`, by merge counting.
pub fn inversions(w: &Permutation) -> u64 {
    let mut buf = w.as_slice().to_vec();
    let mut scratch = vec![0; buf.len()];
    merge_count(&mut buf, &mut scratch)
}

fn merge_count(a: &mut [usize], scratch: &mut [usize]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (lo, hi) = a.split_at_mut(mid);
        let (slo, shi) = scratch.split_at_mut(mid);
        merge_count(lo, slo) + merge_count(hi, shi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if a[i] <= a[j] {
            scratch[k] = a[i];
            i += 1;
        } else {
            // every remaining element of the left half exceeds a[j]
            count += (mid - i) as u64;
            scratch[k] = a[j];
            j += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&a[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&a[j..n]);
    a.copy_from_slice(&scratch[..n]);
    count
}

pub fn cycle_counts(w: &Permutation) -> CycleCounts {
    cycle_counts_of(w.as_slice())
}

/// Cycle counts of a raw one-line image; the slice must be a permutation of `1..=len`.
pub fn cycle_counts_of(image: &[usize]) -> CycleCounts {
    let mut seen = vec![false; image.len()];
    let mut out = CycleCounts::new();
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = image[i] - 1;
            len += 1;
        }
        out.record_cycle(len);
    }
    out
}

/// `w^rev(i) = w(n - i + 1)`.
pub fn reverse(w: &Permutation) -> Permutation {
    let mut image = w.as_slice().to_vec();
    image.reverse();
    Permutation { image }
}

/// Replaces each value by its rank within the sequence.
pub fn relative_order(values: &[i64]) -> Result<Permutation> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_unstable_by_key(|&i| values[i]);
    for pair in idx.windows(2) {
        if values[pair[0]] == values[pair[1]] {
            return Err(Error::DuplicateValue(values[pair[0]]));
        }
    }
    let mut image = vec![0; values.len()];
    for (rank, &i) in idx.iter().enumerate() {
        image[i] = rank + 1;
    }
    Ok(Permutation { image })
}

/// Relative order of distinct unsigned values, without the duplicate check.
pub(crate) fn relative_order_distinct(values: &[usize]) -> Permutation {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_unstable_by_key(|&i| values[i]);
    let mut image = vec![0; values.len()];
    for (rank, &i) in idx.iter().enumerate() {
        image[i] = rank + 1;
    }
    Permutation::from_vec_unchecked(image)
}

/// `ln [k]_q = ln(1 + q + ... + q^(k-1))`.
fn ln_q_integer(k: usize, q: f64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    let kf = k as f64;
    if q == 1.0 {
        kf.ln()
    } else if q < 1.0 {
        (-(kf * q.ln()).exp()).ln_1p() - (-q).ln_1p()
    } else {
        let r = q.recip();
        (kf - 1.0) * q.ln() + (-(kf * r.ln()).exp()).ln_1p() - (-r).ln_1p()
    }
}

/// `ln Z_n(q)`, always safe from overflow.
pub fn ln_mallows_normalizer(n: usize, q: f64) -> f64 {
    (1..=n).map(|k| ln_q_integer(k, q)).sum()
}

/// `Z_n(q) = prod_{k=1}^{n} (1 + q + ... + q^(k-1))`.
///
/// Evaluated as a direct product for moderate sizes with `q <= 1`, and through
/// the log domain otherwise; the result may be `inf` when it exceeds `f64`.
pub fn mallows_normalizer(n: usize, q: f64) -> f64 {
    if n > 300 || q > 1.0 {
        return ln_mallows_normalizer(n, q).exp();
    }
    let mut z = 1.0;
    let mut factor = 1.0;
    let mut power = 1.0;
    for _ in 2..=n {
        power *= q;
        factor += power;
        z *= factor;
    }
    z
}
