use thiserror::Error;

use crate::partition::PartitionResult;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model: {0}")]
    Model(String),
    #[error("division by zero: denominator vanishes at the given valuation")]
    DivisionByZero,
    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),
    #[error("invalid instantiation: {0}")]
    InvalidInstantiation(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("region is not graph-preserving: {0}")]
    NotGraphPreserving(String),
    #[error("self-loop at state `{0}` is identically 1")]
    DegenerateLoop(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("region-check budget exhausted at coverage {}", crate::scalar::format_rational(&.0.coverage))]
    BudgetExhausted(Box<PartitionResult>),
    #[error("no feasible instantiation found")]
    NotFound,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
