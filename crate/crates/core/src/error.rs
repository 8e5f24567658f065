use thiserror::Error;

use crate::spectral::ModelParams;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },

    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    Shape { expected: (usize, usize), got: (usize, usize) },

    #[error("expected a {expected} field")]
    Space { expected: &'static str },

    #[error("GMRES did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    GmresNoConvergence { iterations: usize, residual: f64 },

    #[error("Newton iteration exceeded {max_iter} iterations (residual {residual:.3e})")]
    MaxIterExceeded { max_iter: usize, residual: f64 },

    #[error("Newton iteration converged to the zero solution")]
    ConvergedToZero,

    #[error("continuation stalled on leg {leg} at {params:?}")]
    ContinuationStalled { leg: usize, params: ModelParams },

    #[error("moving frame is ill-conditioned (det of the density Hessian {det:.3e})")]
    IllConditionedFrame { det: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("time series: {0}")]
    Series(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid { field: field.into(), reason: reason.into() }
    }

    /// Errors caused by bad user input rather than by a failed computation.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::Invalid { .. } | Error::Parse { .. } | Error::UnknownPreset(_) | Error::Shape { .. } | Error::Space { .. }
        )
    }
}
