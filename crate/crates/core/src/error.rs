use thiserror::Error;

use crate::quadrature::Estimate;

pub type Result<T> = std::result::Result<T, HardyError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    /// Parameters outside the admissible range (bad `d`, `p`, `α`, grids...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input lies on a pole or outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature rule ran out of budget before reaching the tolerance.
    #[error("quadrature failed to converge ({reason}); partial estimate {partial:?}")]
    QuadratureFailure { reason: String, partial: Estimate },

    /// A singular integral does not converge in the principal-value sense.
    #[error("divergent integral: {0}")]
    Divergence(String),

    /// The right-hand side of a Hardy ratio vanishes.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl HardyError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        HardyError::InvalidParameter(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        HardyError::Domain(msg.into())
    }

    /// True for errors caused by bad user input rather than numerics.
    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            HardyError::InvalidParameter(_) | HardyError::Domain(_) | HardyError::Degenerate(_)
        )
    }
}
