use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (bad sizes, invalid ranges, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A value left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed text input, with the 1-based line it was found on.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The requested (network class, update rule) combination has no closed form.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Every optimizer start failed to produce an acceptable fit.
    #[error("fit failed: {msg} (best residual {best_residual:.6e})")]
    FitFailure { msg: String, best_residual: f64 },

    /// An internal invariant broke; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
