use thiserror::Error;

/// Errors raised by the q-arithmetic, series and transform routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {max_terms} terms ({what})")]
    NotConverged { what: String, max_terms: usize },

    #[error(
        "cancellation: {what} needs about {required_bits} bits of working precision, \
         configured maximum is {max_bits}"
    )]
    Cancellation {
        what: String,
        required_bits: u32,
        max_bits: u32,
    },

    #[error("pole of the q-gamma function at z = {0}")]
    Pole(f64),

    #[error("invalid series specification: {0}")]
    InvalidSpec(String),

    #[error("grid window too small: {0}")]
    WindowTooSmall(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("derivative at x = 0 requires f'(0)")]
    MissingDerivative,

    #[error("q = {q} violates the grid-compatibility condition ln(1-q)/ln(q) in 2Z")]
    GridIncompatible { q: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl QError {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            QError::NotConverged { .. } | QError::Cancellation { .. } | QError::Pole(_)
        )
    }
}

impl From<std::io::Error> for QError {
    fn from(err: std::io::Error) -> Self {
        QError::Io(err.to_string())
    }
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
