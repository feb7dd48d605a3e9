use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible code lengths: Kraft sum {0} exceeds 1")]
    InfeasibleLengths(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("level bound violated for n={n}, m={m}: {count} strings")]
    Certification { n: usize, m: usize, count: u64 },
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("degenerate seed: {0}")]
    DegenerateSeed(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err($crate::error::Error::$variant(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure;
