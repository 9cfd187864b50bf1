use thiserror::Error;

/// Errors raised across the library. Variants map onto the failure classes
/// callers need to distinguish (bad input, numerical trouble, infeasible runs).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("numerical instability: {0}")]
    Instability(String),
    #[error("accuracy target not met: {0}")]
    Accuracy(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input at offset {offset}: {msg}")]
    Input { offset: usize, msg: String },
    #[error("infeasible: {0}")]
    Feasibility(String),
    #[error("internal consistency violation: {0}")]
    Logic(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn range_err(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}
