//! Sampling regeneration blocks: excursions of the Mallows process for `q < 1`
//! and symmetric pair/central blocks harvested from finite samples for `q > 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::perm::Permutation;
use crate::regen::chain::{pair_return, single_return};
use crate::regen::decompose::{
    antiadditive_cuts, pair_block, relabel_interval, BlockKind, Excursion, SymmetricBlock,
};
use crate::rng::RngStream;
use crate::sampler::{FiniteSampler, MallowsProcess};
use crate::stats::{EstimateReport, PowerSums};

/// `count` consecutive excursions of one Mallows process started at time 0.
pub fn sample_excursions<R: Rng>(q: f64, count: usize, cap: u64, rng: R) -> Result<Vec<Excursion>> {
    if count == 0 {
        return Err(Error::BadParameter("count must be at least 1".into()));
    }
    let mut process = MallowsProcess::new(q, rng)?;
    let mut buf = Vec::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        process.next_excursion_into(&mut buf, cap)?;
        out.push(Excursion {
            block: Permutation::from_vec_unchecked(buf.clone()),
        });
    }
    Ok(out)
}

/// Which pair blocks of a finite symmetric decomposition count as interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestPolicy {
    /// Pair blocks dropped at the outer ends of the permutation.
    pub skip_outer: usize,
    /// Pair blocks dropped next to the central block.
    pub skip_inner: usize,
}

impl Default for HarvestPolicy {
    fn default() -> Self {
        HarvestPolicy {
            skip_outer: 1,
            skip_inner: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Interior pair blocks and the central block of one permutation.
pub struct SymmetricSplit {
    pub pairs: Vec<SymmetricBlock>,
    pub central: SymmetricBlock,
    pub parity: Parity,
}

/// Splits `w` by its symmetric cuts, keeping only the pair blocks allowed by `policy`.
pub fn split_symmetric(w: &Permutation, policy: HarvestPolicy) -> SymmetricSplit {
    let img = w.as_slice();
    let n = img.len();
    let cuts = antiadditive_cuts(w);
    let r = cuts.len();
    let mut pairs = Vec::new();
    let mut prev = 0;
    for (j, &k) in cuts.iter().enumerate() {
        if j >= policy.skip_outer && j + policy.skip_inner < r {
            pairs.push(SymmetricBlock {
                kind: BlockKind::Pair,
                block: pair_block(img, prev, k),
            });
        }
        prev = k;
    }
    let central = relabel_interval(img, prev, n - prev);
    SymmetricSplit {
        pairs,
        central: SymmetricBlock {
            kind: BlockKind::Central,
            block: central,
        },
        parity: Parity::of(n),
    }
}

/// Blocks harvested from `reps` independent Mallows(n, q) samples, `q > 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricHarvest {
    pub q: f64,
    pub n: usize,
    pub parity: Parity,
    pub policy: HarvestPolicy,
    pub pair_blocks: Vec<SymmetricBlock>,
    /// One central block per sample: a draw of the even or odd limit permutation.
    pub centrals: Vec<SymmetricBlock>,
}

pub fn sample_symmetric_blocks<R: Rng>(
    q: f64,
    n: usize,
    reps: usize,
    policy: HarvestPolicy,
    rng: &mut R,
) -> Result<SymmetricHarvest> {
    if q <= 1.0 {
        return Err(Error::BadParameter(format!("symmetric blocks need q > 1, got {q}")));
    }
    let sampler = FiniteSampler::new(n, q)?;
    let mut pair_blocks = Vec::new();
    let mut centrals = Vec::with_capacity(reps);
    for _ in 0..reps {
        let w = sampler.sample(rng);
        let split = split_symmetric(&w, policy);
        pair_blocks.extend(split.pairs);
        centrals.push(split.central);
    }
    Ok(SymmetricHarvest {
        q,
        n,
        parity: Parity::of(n),
        policy,
        pair_blocks,
        centrals,
    })
}

/// Lengths of consecutive regeneration blocks: `T` for `q < 1` and `S = 2R+` for `q > 1`.
pub(crate) struct BlockLengths {
    ln_q: f64,
    symmetric: bool,
    cap: u64,
}

impl BlockLengths {
    pub fn new(q: f64, cap: u64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) || q == 1.0 {
            return Err(Error::BadParameter(format!("need q > 0 and q != 1, got {q}")));
        }
        let symmetric = q > 1.0;
        let ln_q = if symmetric { -q.ln() } else { q.ln() };
        Ok(BlockLengths { ln_q, symmetric, cap })
    }

    #[inline]
    pub fn next<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        if self.symmetric {
            Ok(2 * pair_return(self.ln_q, self.cap, rng)?)
        } else {
            single_return(self.ln_q, self.cap, rng)
        }
    }
}

/// Power sums of i.i.d. block lengths (`T` or `S`), simulated through the chains.
pub fn block_length_moments(
    q: f64,
    count: u64,
    cap: u64,
    exec: &Executor,
    stream: RngStream,
) -> Result<PowerSums> {
    let lengths = BlockLengths::new(q, cap)?;
    let parts = exec.map_chunks(count, stream, |_, share, s| {
        let mut rng = s.rng();
        let mut acc = PowerSums::default();
        for _ in 0..share {
            acc.push(lengths.next(&mut rng)?);
        }
        Ok::<_, Error>(acc)
    });
    let mut total = PowerSums::default();
    for p in parts {
        total.merge(&p?);
    }
    Ok(total)
}

/// Length of the regeneration block covering position `n`.
///
/// For `q < 1` these are excursions of the Mallows process; for `q > 1` the
/// symmetric blocks `S = 2R+` accumulated outward from a regeneration.
pub fn covering_block_length(
    q: f64,
    n: u64,
    reps: u64,
    cap: u64,
    exec: &Executor,
    stream: RngStream,
) -> Result<EstimateReport> {
    let lengths = BlockLengths::new(q, cap)?;
    let n = n.max(1);
    let parts = exec.map_chunks(reps, stream, |_, share, s| {
        let mut rng = s.rng();
        let mut out = Vec::with_capacity(share as usize);
        for _ in 0..share {
            let mut covered = 0u64;
            loop {
                let len = lengths.next(&mut rng)?;
                covered += len;
                if covered >= n {
                    out.push(len as f64);
                    break;
                }
            }
        }
        Ok::<_, Error>(out)
    });
    let mut values = Vec::with_capacity(reps as usize);
    for p in parts {
        values.extend(p?);
    }
    Ok(EstimateReport::from_values("covering_block_length", &values, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::cycle_counts;
    use crate::regen::decompose::decompose_antiadditive;

    #[test]
    fn excursions_near_zero_are_fixed_points() {
        let ex = sample_excursions(1e-300, 100, 10, RngStream::new(1, 0).rng()).unwrap();
        assert!(ex.iter().all(|e| e.block == Permutation::identity(1)));
        assert!(sample_excursions(0.5, 0, 10, RngStream::new(1, 0).rng()).is_err());
    }

    #[test]
    fn excursion_cap_is_an_error() {
        let r = sample_excursions(0.999, 1000, 3, RngStream::new(1, 0).rng());
        assert_eq!(r.unwrap_err(), Error::ExcursionTooLong { cap: 3 });
    }

    #[test]
    fn split_agrees_with_decomposition() {
        let mut rng = RngStream::new(4, 0).rng();
        let none = HarvestPolicy {
            skip_outer: 0,
            skip_inner: 0,
        };
        for n in [0, 1, 2, 7, 50, 301] {
            for _ in 0..20 {
                let w = crate::sampler::sample_finite(n, 3.0, &mut rng).unwrap();
                let d = decompose_antiadditive(&w);
                let s = split_symmetric(&w, none);
                let pairs: Vec<_> = d.blocks[..d.blocks.len() - 1]
                    .iter()
                    .map(|b| b.perm.clone())
                    .collect();
                assert_eq!(s.pairs.iter().map(|b| b.block.clone()).collect::<Vec<_>>(), pairs);
                assert_eq!(s.central.block, d.blocks.last().unwrap().perm);
                let interior = split_symmetric(&w, HarvestPolicy::default()).pairs.len();
                assert_eq!(interior, pairs.len().saturating_sub(2));
            }
        }
    }

    #[test]
    fn harvested_blocks_obey_invariants() {
        let mut rng = RngStream::new(8, 0).rng();
        let h = sample_symmetric_blocks(2.0, 1001, 20, HarvestPolicy::default(), &mut rng).unwrap();
        assert_eq!(h.parity, Parity::Odd);
        assert_eq!(h.centrals.len(), 20);
        assert!(!h.pair_blocks.is_empty());
        for b in h.pair_blocks.iter().chain(&h.centrals) {
            assert!(b.satisfies_invariants());
        }
        // odd n leaves a nonempty central block
        assert!(h.centrals.iter().all(|c| c.length() % 2 == 1));
        for c in &h.centrals {
            let _ = cycle_counts(&c.block);
        }
        assert!(sample_symmetric_blocks(0.5, 10, 1, HarvestPolicy::default(), &mut rng).is_err());
    }

    #[test]
    fn covering_block_degenerates() {
        let ex = Executor::sequential();
        let r = covering_block_length(1e-300, 1000, 50, 100, &ex, RngStream::new(1, 0)).unwrap();
        assert_eq!(r.mean, 1.0);
        assert_eq!(r.samples, 50);
    }
}
