//! Brute-force Mallows law on `S_n` for small `n`.

use std::io::Write;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{inversions, ln_mallows_normalizer, MallowsParams, Permutation};

pub const DEFAULT_ORACLE_CAP: usize = 9;

#[derive(Clone, Debug, Serialize)]
pub struct ExactEntry {
    pub perm: Permutation,
    pub inversions: u64,
    pub probability: f64,
}

/// Every permutation of `S_n` with its Mallows probability, in lexicographic order.
#[derive(Clone, Debug, Serialize)]
pub struct ExactDistribution {
    pub n: usize,
    pub q: f64,
    pub entries: Vec<ExactEntry>,
}

pub fn exact_distribution(n: usize, q: f64) -> Result<ExactDistribution> {
    exact_distribution_capped(n, q, DEFAULT_ORACLE_CAP)
}

pub fn exact_distribution_capped(n: usize, q: f64, cap: usize) -> Result<ExactDistribution> {
    let q = MallowsParams::new(q)?.q();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let ln_z = ln_mallows_normalizer(n, q);
    let ln_q = q.ln();
    let entries = (1..=n)
        .permutations(n)
        .map(|image| {
            let perm = Permutation::from_vec_unchecked(image);
            let inv = inversions(&perm);
            let probability = (inv as f64 * ln_q - ln_z).exp();
            ExactEntry {
                perm,
                inversions: inv,
                probability,
            }
        })
        .collect();
    Ok(ExactDistribution { n, q, entries })
}

impl ExactDistribution {
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn probability_of(&self, w: &Permutation) -> Option<f64> {
        // entries are sorted lexicographically
        self.entries
            .binary_search_by(|e| e.perm.cmp(w))
            .ok()
            .map(|k| self.entries[k].probability)
    }

    /// `sum_w P(w) f(w)` for a vector-valued statistic `f`.
    pub fn expectation<F>(&self, statistic: F) -> Vec<f64>
    where
        F: Fn(&Permutation) -> Vec<f64>,
    {
        let mut acc: Vec<f64> = Vec::new();
        for e in &self.entries {
            let v = statistic(&e.perm);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            assert_eq!(v.len(), acc.len(), "statistic changed dimension");
            for (a, x) in acc.iter_mut().zip(v) {
                *a += e.probability * x;
            }
        }
        acc
    }

    /// Law of the inversion count, indexed by `l(w)`.
    pub fn inversion_marginal(&self) -> Vec<f64> {
        let max = self.n * self.n.saturating_sub(1) / 2;
        let mut pmf = vec![0.0; max + 1];
        for e in &self.entries {
            pmf[e.inversions as usize] += e.probability;
        }
        pmf
    }

    /// CSV with columns `perm,inversions,probability`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["perm", "inversions", "probability"])?;
        for e in &self.entries {
            wtr.write_record([
                e.perm.one_line(),
                e.inversions.to_string(),
                e.probability.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Thin wrapper over [`exact_distribution`].
pub fn exact_expectation<F>(n: usize, q: f64, statistic: F) -> Result<Vec<f64>>
where
    F: Fn(&Permutation) -> Vec<f64>,
{
    Ok(exact_distribution(n, q)?.expectation(statistic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::cycle_counts;

    fn fixed_points(w: &Permutation) -> Vec<f64> {
        vec![cycle_counts(w).get(1) as f64]
    }

    #[test]
    fn two_element_law() {
        for q in [0.3, 0.5, 1.0, 2.0, 7.5] {
            let d = exact_distribution(2, q).unwrap();
            assert_eq!(d.entries.len(), 2);
            assert!((d.entries[0].probability - 1.0 / (1.0 + q)).abs() < 1e-15);
            assert!((d.entries[1].probability - q / (1.0 + q)).abs() < 1e-15);
            let e = d.expectation(fixed_points)[0];
            assert!((e - 2.0 / (1.0 + q)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_expectations() {
        assert!((exact_expectation(1, 0.4, fixed_points).unwrap()[0] - 1.0).abs() < 1e-15);
        assert!((exact_expectation(2, 1.0, fixed_points).unwrap()[0] - 1.0).abs() < 1e-15);
        // uniform: E(fixed points) = 1 for every n
        assert!((exact_expectation(6, 1.0, fixed_points).unwrap()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mass_is_one() {
        for n in 0..=8 {
            for q in [0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0] {
                let d = exact_distribution(n, q).unwrap();
                assert!((d.total_mass() - 1.0).abs() < 1e-12, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            exact_distribution(10, 0.5).unwrap_err(),
            Error::TooLarge { n: 10, cap: 9 }
        );
        assert!(exact_distribution_capped(3, 0.5, 2).is_err());
        assert!(exact_distribution(2, 0.0).is_err());
    }

    #[test]
    fn csv_layout() {
        let d = exact_distribution(2, 1.0).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "perm,inversions,probability\n\"1,2\",0,0.5\n\"2,1\",1,0.5\n");
    }

    #[test]
    fn lookup_by_permutation() {
        let d = exact_distribution(3, 2.0).unwrap();
        let p = d.probability_of(&Permutation::reversal(3)).unwrap();
        assert!((p - 8.0 / 21.0).abs() < 1e-15);
    }
}
