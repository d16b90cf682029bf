use thiserror::Error;

use crate::integrator::IntegrationError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected} levels, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("population {value:e} at level {index} is below the clip tolerance")]
    NegativePopulation { index: usize, value: f64 },

    #[error("populations sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("this operation requires a single emitter (N = 1), got N = {n}")]
    NotSingleEmitter { n: u32 },

    #[error("integration failed: {0}")]
    Integration(#[from] IntegrationError),

    #[error("expected exactly two minimizer switches, found {count}")]
    CrossingCount { count: usize },

    #[error("pulse not contained in the trajectory window")]
    PulseNotContained,

    #[error("extremum of {quantity} lies on the window boundary")]
    ExtremumOnBoundary { quantity: &'static str },
}
