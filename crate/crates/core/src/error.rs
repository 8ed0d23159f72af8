use crate::prelude::*;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("{what} exceeds the configured limit ({size} > {limit})")]
    Resource {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("symmetry violation: {0}")]
    Symmetry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit {qubit} carries a non-diagonal letter and cannot be tapered")]
    NotASymmetry { qubit: usize },

    #[error(
        "flat landscape: mean energy difference {0:e} is too small to calibrate the step size"
    )]
    FlatLandscape(f64),

    #[error("objective failed: {0}")]
    Objective(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
