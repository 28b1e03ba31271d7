//! Shared tuning knobs for certified computations.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Precision and search limits threaded through every decision
/// procedure. `precision_bits` caps the working radius (2^-bits) that
/// adaptive refinement may request; `power_cap` bounds stabilization
/// searches over operator powers.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub power_cap: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: 128,
            power_cap: 16,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(CoreError::PreconditionFailed(format!(
                "precision_bits must be at least 64, got {}",
                self.precision_bits
            )));
        }
        if self.power_cap == 0 {
            return Err(CoreError::PreconditionFailed(
                "power_cap must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Run `f` at doubling precision until it stops reporting precision
/// exhaustion or the configured ceiling is passed.
pub fn with_precision<T>(
    cfg: &RunConfig,
    context: &str,
    mut f: impl FnMut(u32) -> Result<T>,
) -> Result<T> {
    let mut bits = 64.min(cfg.precision_bits);
    loop {
        match f(bits) {
            Err(CoreError::PrecisionExhausted { .. }) if bits < cfg.precision_bits => {
                bits = (bits * 2).min(cfg.precision_bits);
            }
            Err(CoreError::PrecisionExhausted { .. }) => {
                return Err(CoreError::PrecisionExhausted {
                    bits: cfg.precision_bits,
                    context: context.to_string(),
                });
            }
            other => return other,
        }
    }
}
