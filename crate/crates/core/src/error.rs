use thiserror::Error;

/// Errors produced by set-system construction, sampling and experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not supported (geometric generators handle d <= 3)")]
    DimensionTooHigh(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeds enumeration budget ({value} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("operation requires a non-empty set system")]
    EmptySystem,

    #[error("index {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("system is not {delta}-separated: vectors {a} and {b} are at distance {distance}")]
    NotSeparated {
        delta: usize,
        a: usize,
        b: usize,
        distance: usize,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
