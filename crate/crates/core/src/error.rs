use thiserror::Error;

/// Errors raised by the exact-arithmetic kernels and the fixture layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),

    #[error("exponent overflow")]
    Overflow,

    #[error("colon by the zero ideal")]
    ColonByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Input(String),

    /// A sequence term was requested outside the range a table stores.
    #[error("term {n} lies beyond the horizon {horizon}")]
    BeyondHorizon { n: usize, horizon: usize },

    #[error("inconsistent table: {0}")]
    InconsistentTable(String),

    #[error("not a generalized naive sequence: {0}")]
    NotGenNaive(String),

    #[error("not stabilized within horizon: {0}")]
    NotStabilized(String),

    /// A proven identity failed; always an implementation bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed or out-of-contract input.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::VarMismatch(..)
                | Error::Parse(_)
                | Error::Input(_)
                | Error::ColonByZero
                | Error::BeyondHorizon { .. }
                | Error::InconsistentTable(_)
                | Error::NotGenNaive(_)
        )
    }
}
