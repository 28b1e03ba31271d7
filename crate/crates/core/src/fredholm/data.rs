//! Index data and chain lengths for banded-plus-finite-rank operators.

use crate::config::{with_precision, RunConfig};
use crate::error::Result;
use crate::op::bet::BetOperator;
use crate::op::vector::BlockVector;
use crate::symbol::{circle_zero_test, winding_number};

use super::extnat::ExtNat;
use super::kernel::kernel_at;

/// Kernel and cokernel dimensions with the index when it is defined.
#[derive(Clone, Debug)]
pub struct FredholmData {
    pub alpha: ExtNat,
    pub beta: ExtNat,
    /// alpha - beta; None when the operator is not semi-Fredholm.
    pub index: Option<i64>,
    /// Closed range with a Fredholm determinant symbol: equivalent to
    /// the determinant symbol having no zero on the unit circle.
    pub semi_fredholm: bool,
    pub kernel_basis: Vec<BlockVector>,
}

/// Compute kernel data for an operator whose determinant symbol is not
/// identically zero; adaptive in precision up to the configured limit.
fn kernel_adaptive(t: &BetOperator, cfg: &RunConfig) -> Result<Vec<BlockVector>> {
    with_precision(cfg, "kernel basis", |bits| kernel_at(t, bits))
}

/// Full Fredholm data of a one- or two-component operator.
///
/// A vanishing determinant symbol leaves only the finite-rank part on
/// some diagonal, which forces infinite-dimensional kernel and
/// cokernel; no basis is enumerated in that case. With a circle zero
/// the dimensions stay computable but the index is undefined.
pub fn fredholm_data(t: &BetOperator, cfg: &RunConfig) -> Result<FredholmData> {
    cfg.validate()?;
    let det = t.symbol.det_symbol();
    if det.is_zero() {
        return Ok(FredholmData {
            alpha: ExtNat::Infinite,
            beta: ExtNat::Infinite,
            index: None,
            semi_fredholm: false,
            kernel_basis: Vec::new(),
        });
    }
    let kernel_basis = kernel_adaptive(t, cfg)?;
    let alpha = ExtNat::Finite(kernel_basis.len() as u64);
    if circle_zero_test(&det)? {
        // dimensions are exact, but the range is not closed
        let adj_kernel = kernel_adaptive(&t.adjoint(), cfg)?;
        return Ok(FredholmData {
            alpha,
            beta: ExtNat::Finite(adj_kernel.len() as u64),
            index: None,
            semi_fredholm: false,
            kernel_basis,
        });
    }
    let winding = winding_number(&det)?;
    let index = -winding;
    let beta = kernel_basis.len() as i64 - index;
    debug_assert!(beta >= 0, "cokernel dimension must be nonnegative");
    Ok(FredholmData {
        alpha,
        beta: ExtNat::Finite(beta as u64),
        index: Some(index),
        semi_fredholm: true,
        kernel_basis,
    })
}

/// Ascent and descent: the stabilization points of the kernel and
/// range chains of the operator powers.
///
/// For a semi-Fredholm operator a positive index forces infinite
/// ascent and a negative index infinite descent; the finite side is
/// found by iterating powers until the kernel dimension stabilizes,
/// with `cfg.power_cap` bounding the search. Without semi-Fredholm
/// structure the chains are not tracked and both report ExceedsCap(0).
pub fn asc_des(t: &BetOperator, cfg: &RunConfig) -> Result<(ExtNat, ExtNat)> {
    cfg.validate()?;
    let det = t.symbol.det_symbol();
    if det.is_zero() || circle_zero_test(&det)? {
        return Ok((ExtNat::ExceedsCap(0), ExtNat::ExceedsCap(0)));
    }
    let index = -winding_number(&det)?;
    let ascent = if index > 0 {
        ExtNat::Infinite
    } else {
        stabilize_kernel_chain(t, cfg)?
    };
    let descent = if index < 0 {
        ExtNat::Infinite
    } else {
        stabilize_kernel_chain(&t.adjoint(), cfg)?
    };
    Ok((ascent, descent))
}

/// First k with alpha(T^k) = alpha(T^(k+1)), searching k <= cap.
fn stabilize_kernel_chain(t: &BetOperator, cfg: &RunConfig) -> Result<ExtNat> {
    let mut power = t.clone();
    let mut prev = 0u64; // alpha(T^0)
    for k in 0..=cfg.power_cap {
        let alpha = kernel_adaptive(&power, cfg)?.len() as u64;
        if alpha == prev {
            return Ok(ExtNat::Finite(k));
        }
        if k == cfg.power_cap {
            break;
        }
        prev = alpha;
        power = power.compose(t)?;
    }
    Ok(ExtNat::ExceedsCap(cfg.power_cap))
}
