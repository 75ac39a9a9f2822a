//! Simulation laboratory for cycle statistics of Mallows permutations with a
//! fixed parameter `q != 1`.
//!
//! The crate is organized bottom-up:
//!
//! - [`perm`] and [`exact`]: permutations, inversions, cycles, and the exact
//!   Mallows law on small symmetric groups.
//! - [`sampler`]: finite Mallows samples and the one-sided Mallows process.
//! - [`regen`]: the running-maximum chain, excursions, additive and symmetric
//!   block decompositions, and size-bias diagnostics.
//! - [`constants`]: q-series and renewal-reward estimates of the limiting
//!   means and covariances.
//! - [`harness`]: Gaussian-shape, scaling, parity and size-bias checks.
//! - [`validate`]: the full acceptance battery.

pub mod constants;
pub mod error;
pub mod exact;
pub mod exec;
mod fenwick;
pub mod harness;
pub mod perm;
pub mod regen;
pub mod rng;
pub mod sampler;
pub mod statistic;
pub mod stats;
pub mod validate;

pub use error::{Error, Result};
pub use exec::{Executor, Plan};
pub use perm::{CycleCounts, MallowsParams, Permutation};
pub use rng::RngStream;
