use thiserror::Error;

/// Errors raised by the workbench.
///
/// Precondition failures are `InvalidParameter`/`Parity`/`DegreeOverflow`;
/// `Simplex` and `Internal` indicate a broken invariant and are never
/// recovered from.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("point {0} is not on the grid")]
    NotOnGrid(String),

    #[error("degree overflow: polynomial of degree {degree} exceeds limit {limit}")]
    DegreeOverflow { degree: i64, limit: i64 },

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("mismatched sizes: {0}")]
    Mismatch(String),

    #[error("simplex failure: {0}")]
    Simplex(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures caused by bad input rather than broken internals.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::NotOnGrid(_)
                | Error::DegreeOverflow { .. }
                | Error::Parity(_)
                | Error::Mismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
