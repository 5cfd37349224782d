use thiserror::Error;

/// Errors raised by the optimizer, the objective registry and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// The objective produced NaN or an infinity during probing or evaluation.
    #[error("objective returned non-finite value {value} at iteration {iteration}")]
    ObjectiveFailure { iteration: usize, value: f64 },

    #[error("unknown objective `{name}` (valid: {valid})")]
    UnknownObjective { name: String, valid: String },

    #[error("grid of {nodes} nodes exceeds the cap of {cap}")]
    GridTooLarge { nodes: u128, cap: u128 },
}

impl BasError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        BasError::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, BasError>;
