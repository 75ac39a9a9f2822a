//! Regenerative structure of Mallows permutations.

mod blocks;
mod chain;
mod decompose;

pub use blocks::{
    block_length_moments, covering_block_length, sample_excursions, sample_symmetric_blocks,
    split_symmetric, HarvestPolicy, Parity, SymmetricHarvest, SymmetricSplit,
};
pub use chain::{
    chain_step, occupation_distribution, pair_chain_return_times, pair_step,
    single_chain_return_times, ChainState, Occupation, DEFAULT_STEP_CAP,
};
pub use decompose::{
    additive_cuts, antiadditive_cuts, decompose_additive, decompose_antiadditive, Block,
    BlockKind, BlockSummary, Decomposition, DecompositionKind, DecompositionSummary, Excursion,
    SymmetricBlock,
};
