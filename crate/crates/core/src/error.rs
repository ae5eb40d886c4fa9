use thiserror::Error;

/// Errors raised by model, numerics and analysis routines.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: index {requested} is above the maximum {max}")]
    Capacity { requested: usize, max: usize },

    #[error("integration did not converge after {subdivisions} subdivisions: best estimate {estimate:e}, error estimate {error_estimate:e}")]
    Convergence {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("basis cutoff {cutoff} too small: completeness deficit {deficit:e}")]
    InsufficientBasis { cutoff: usize, deficit: f64 },

    #[error("insufficient coverage: {0}")]
    InsufficientCoverage(String),

    #[error("fit failed: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors caused by bad inputs rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::Capacity { .. } | Error::InsufficientCoverage(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
