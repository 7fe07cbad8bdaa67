use thiserror::Error;

/// Errors raised by the exact geometry kernel.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (unknown label, bad family tag, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An index such as a face dimension or Laplacian degree is outside its range.
    #[error("{what} = {value} out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    /// An operation requiring a full-dimensional polytope got a lower-dimensional one.
    #[error("polytope has dimension {dim} in ambient dimension {ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },

    /// A configured work budget would be exceeded. Never silently truncated.
    #[error("budget exceeded for {resource}: needs {required}, limit {limit}")]
    Budget {
        resource: &'static str,
        required: u128,
        limit: u128,
    },

    /// An internal self-check failed (ordering bug, inconsistent certificate, ...).
    #[error("verification failed: {0}")]
    Verification(String),

    /// An integer result did not fit the fixed-width representation used for it.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
