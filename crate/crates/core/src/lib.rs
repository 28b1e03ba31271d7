//! Exact spectral classification of banded-plus-finite-rank operators on
//! l2, and constructive Browder/invertible completions of upper-triangular
//! operator matrices.
//!
//! The crate is organized bottom-up:
//!
//! - [`num`]: exact complex rationals and certified complex ball arithmetic.
//! - [`poly`]: exact polynomial root counting (unit circle, unit disk,
//!   rectangles) and certified root isolation.
//! - [`linalg`]: exact rational matrices - rank, kernels, power defects -
//!   plus randomized finite-dimensional identity oracles.
//! - [`symbol`]: Laurent symbols of banded operators and their exact
//!   circle-zero and winding decisions.
//! - [`op`]: the operator class itself (Toeplitz part plus finite-rank
//!   perturbation with exponential-polynomial factors) and its algebra.
//! - [`fredholm`]: kernel data, Fredholm data, ascent and descent.
//! - [`browder`]: classification into the invertibility/Fredholm/Weyl/
//!   Browder taxonomy and spectra membership.
//! - [`completion`]: existence tests and constructive completions with
//!   verifiable certificates.
//! - [`spectra`]: pointwise verdicts and grid scans of the completion
//!   spectrum obstruction set.
//! - [`specio`]: the JSON interchange format for operators and vectors.

pub mod browder;
pub mod completion;
pub mod config;
pub mod error;
pub mod fredholm;
pub mod jsonio;
pub mod linalg;
pub mod num;
pub mod op;
pub mod poly;
pub mod spectra;
pub mod symbol;
pub mod tri;

pub use error::{CoreError, Result};
