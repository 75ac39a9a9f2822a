//! The running-maximum chain `M_t = max_{i<=t} w(i) - t` and its two-copy version.
//!
//! Zeros of `M` are exactly the renewals of the Mallows process; joint zeros of
//! two independent copies are the symmetric regenerations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::geometric_ln;

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainState {
    Single(u64),
    Pair(u64, u64),
}

impl ChainState {
    pub fn is_regeneration(self) -> bool {
        match self {
            ChainState::Single(m) => m == 0,
            ChainState::Pair(m, m2) => m == 0 && m2 == 0,
        }
    }
}

/// `M_{t+1} = max(M_t, Z) - 1`.
#[inline]
pub fn chain_step(m: u64, z: u64) -> u64 {
    debug_assert!(z >= 1);
    #[cfg(not(feature = "mutant-chain-step"))]
    {
        m.max(z) - 1
    }
    #[cfg(feature = "mutant-chain-step")]
    {
        m.max(z) + 1
    }
}

/// Steps both coordinates with their own drivers.
#[inline]
pub fn pair_step(state: (u64, u64), z: u64, z2: u64) -> (u64, u64) {
    (chain_step(state.0, z), chain_step(state.1, z2))
}

fn ln_q_checked(q: f64) -> Result<f64> {
    if q > 0.0 && q < 1.0 {
        Ok(q.ln())
    } else {
        Err(Error::BadParameter(format!("chain needs q in (0, 1), got {q}")))
    }
}

/// Return times of the single chain to 0, started at 0. In law these are excursion sizes.
pub fn single_chain_return_times<R: Rng + ?Sized>(
    q: f64,
    count: usize,
    cap: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let ln_q = ln_q_checked(q)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(single_return(ln_q, cap, rng)?);
    }
    Ok(out)
}

#[inline]
pub(crate) fn single_return<R: Rng + ?Sized>(ln_q: f64, cap: u64, rng: &mut R) -> Result<u64> {
    let mut m = 0;
    let mut t = 0u64;
    loop {
        m = chain_step(m, geometric_ln(ln_q, rng));
        t += 1;
        if m == 0 {
            return Ok(t);
        }
        if t >= cap {
            return Err(Error::ExcursionTooLong { cap });
        }
    }
}

/// Return times `R+` of the pair chain to `(0, 0)`, started at `(0, 0)`.
pub fn pair_chain_return_times<R: Rng + ?Sized>(
    q: f64,
    count: usize,
    cap: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let ln_q = ln_q_checked(q)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(pair_return(ln_q, cap, rng)?);
    }
    Ok(out)
}

#[inline]
pub(crate) fn pair_return<R: Rng + ?Sized>(ln_q: f64, cap: u64, rng: &mut R) -> Result<u64> {
    let mut s = (0, 0);
    let mut t = 0u64;
    loop {
        s = pair_step(s, geometric_ln(ln_q, rng), geometric_ln(ln_q, rng));
        t += 1;
        if s == (0, 0) {
            return Ok(t);
        }
        if t >= cap {
            return Err(Error::ReturnTooLong { cap });
        }
    }
}

/// Long-run occupation frequencies of the single chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Occupation {
    pub steps: u64,
    pub burn_in: u64,
    /// `pmf[j]` is the fraction of recorded steps spent in state `j`.
    pub pmf: Vec<f64>,
    /// Batch-means standard error of `pmf[0]`.
    pub zero_std_error: f64,
}

const OCCUPATION_BATCHES: u64 = 100;

/// Runs the chain from 0 for `burn_in + steps` steps and records the last `steps` states.
pub fn occupation_distribution<R: Rng + ?Sized>(
    q: f64,
    steps: u64,
    burn_in: u64,
    rng: &mut R,
) -> Result<Occupation> {
    let ln_q = ln_q_checked(q)?;
    if steps < OCCUPATION_BATCHES {
        return Err(Error::BadParameter(format!(
            "need at least {OCCUPATION_BATCHES} recorded steps"
        )));
    }
    let mut m = 0u64;
    for _ in 0..burn_in {
        m = chain_step(m, geometric_ln(ln_q, rng));
    }
    let mut counts: Vec<u64> = vec![0; 8];
    let batch_len = steps / OCCUPATION_BATCHES;
    let mut batch_zero = Vec::with_capacity(OCCUPATION_BATCHES as usize);
    let mut zeros_in_batch = 0u64;
    for t in 0..steps {
        m = chain_step(m, geometric_ln(ln_q, rng));
        let j = m as usize;
        if j >= counts.len() {
            counts.resize(j + 1, 0);
        }
        counts[j] += 1;
        if m == 0 {
            zeros_in_batch += 1;
        }
        if (t + 1) % batch_len == 0 && (batch_zero.len() as u64) < OCCUPATION_BATCHES {
            batch_zero.push(zeros_in_batch as f64 / batch_len as f64);
            zeros_in_batch = 0;
        }
    }
    let pmf = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    Ok(Occupation {
        steps,
        burn_in,
        pmf,
        zero_std_error: crate::stats::batch_std_error(&batch_zero),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    #[cfg(not(feature = "mutant-chain-step"))]
    fn step_examples() {
        assert_eq!(chain_step(0, 1), 0);
        assert_eq!(chain_step(0, 3), 2);
        assert_eq!(chain_step(5, 2), 4);
        assert_eq!(pair_step((0, 4), 1, 1), (0, 3));
        assert!(ChainState::Pair(0, 0).is_regeneration());
        assert!(!ChainState::Pair(0, 1).is_regeneration());
        assert!(ChainState::Single(0).is_regeneration());
    }

    #[test]
    fn degenerate_chains() {
        let mut rng = RngStream::new(1, 0).rng();
        let r = pair_chain_return_times(1e-300, 1000, 10, &mut rng).unwrap();
        assert!(r.iter().all(|&t| t == 1));
        let occ = occupation_distribution(1e-300, 1000, 10, &mut rng).unwrap();
        assert_eq!(occ.pmf[0], 1.0);
    }

    #[test]
    fn caps_are_errors() {
        let mut rng = RngStream::new(1, 0).rng();
        assert_eq!(
            pair_chain_return_times(0.999, 100, 2, &mut rng).unwrap_err(),
            Error::ReturnTooLong { cap: 2 }
        );
        assert!(single_chain_return_times(0.999, 1000, 1, &mut rng).is_err());
        assert!(pair_chain_return_times(1.5, 1, 10, &mut rng).is_err());
    }
}
