//! Exact and certified finite-dimensional linear algebra.

pub mod ball;
pub mod oracle;
pub mod rational;

pub use ball::{eliminate_adaptive, BallMatrix, Elimination};
pub use oracle::{corner_suite, product_dimension_suite, two_of_three_suite, OracleReport};
pub use rational::{assemble_block, RationalMatrix};
