use thiserror::Error;

/// Errors raised by generators, learners, and evaluation protocols.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A malformed row in a scenario CSV file; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Structurally valid file whose contents violate the scenario schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// A metric was requested on data that cannot support it.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("empty window")]
    EmptyWindow,

    /// Non-finite value encountered during numeric computation.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
