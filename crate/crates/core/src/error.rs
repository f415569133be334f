use thiserror::Error;

use crate::dd::DdError;
use crate::ltlf::{EvalError, ParseError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error("{what} exceeds the limit of {limit}")]
    Limit { what: &'static str, limit: usize },
    #[error("atom `{0}` is not part of the alphabet")]
    UnknownAtom(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid specification: {0}")]
    Spec(String),
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
    #[error("strategy error: {0}")]
    Strategy(String),
    #[error("time budget exhausted")]
    Timeout,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Resource caps and timeouts, as opposed to malformed input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Limit { .. } | Error::Timeout)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
