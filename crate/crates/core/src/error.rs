//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input document; `field` names the offending location.
    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    /// A strategy or matrix does not match the game's dimension.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Weights violate the simplex constraints.
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid mutation set: {0}")]
    InvalidMutationSet(String),

    /// Mutation proportions must be positive and sum to at most 1.
    #[error("infeasible proportions: {0}")]
    InfeasibleProportions(String),

    /// Operation requires stability against multiple mutations.
    #[error("strategy is not stable against multiple mutations: {0}")]
    NotMess(String),

    /// The ESS grid fallback could neither certify nor refute.
    #[error(
        "ESS decision indeterminate: grid certification exhausted at denominator {max_denom}"
    )]
    IndeterminateEss { max_denom: u32 },

    #[error("invalid grid spec: {0}")]
    InvalidGridSpec(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// The integrator produced a non-finite state; `t` is the last valid time.
    #[error("integration diverged; last valid time t = {t}")]
    Diverged { t: f64 },
}
