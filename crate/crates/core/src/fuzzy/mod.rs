//! Graded arithmetic over the discretization grid.
//!
//! Everything in here is a pure function over immutable values: grid
//! quantization, the two supported T-norms, the leak-update law over
//! 256-cell membership vectors, Gaussian fuzzy numbers with closed-form
//! fusion, α-cuts and Hartley non-specificity.

mod gaussian;
mod grid;
mod membership;
mod support;

pub use gaussian::{fuse, fuse_quantized, quantize_decimal, GaussianFuzzyNumber, LeakEstimate};
pub use grid::{tnorm, Grade, Grid, TNorm};
pub use membership::{leak_update, AlphaCut, MembershipVector, KEY_DOMAIN};
pub use support::{
    hartley, hartley_drop, one_bit_event, propagate_interval, AffineMap, DiscreteSupport,
    Interval,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("grid step must satisfy 0 < delta <= 1 with 1/delta integral, got {0}")]
    InvalidDelta(f64),
    #[error("alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("sigma must be a positive finite number, got {0}")]
    InvalidSigma(f64),
    #[error("support is empty")]
    EmptySupport,
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), FuzzyError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(FuzzyError::InvalidAlpha(alpha))
    }
}
