//! Banded-plus-finite-rank operators and the sequence vectors they act on.

pub mod bet;
pub mod vector;

pub use bet::{assemble_block_operator, BetOperator, RankOne};
pub use vector::{
    apply_toeplitz, block_inner, inner, power_sum_from, BlockVector, ExpPolyVector, Tail,
};
