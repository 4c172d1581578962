use thiserror::Error;

use crate::cnf::Var;

/// Errors raised by the formula layer and the algorithms built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: universal quantifier blocks are not supported")]
    UnsupportedQuantifier { line: usize },

    #[error("tautological clause on variable {0}")]
    Tautology(Var),

    #[error("variable {0} is neither quantified nor free")]
    UnknownVariable(Var),

    #[error("variable {0} is both quantified and free")]
    OverlappingPartition(Var),

    #[error("clause index {0} is out of range")]
    ClauseIndex(usize),

    #[error("clauses are not resolvable on {0}")]
    NotResolvable(Var),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource budget exhausted: {0}")]
    Budget(String),

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }
}
