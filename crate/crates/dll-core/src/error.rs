use thiserror::Error;

use crate::syntax::Sort;

/// Malformed concrete syntax.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

/// A subterm whose sort disagrees with the sorting table.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("sort error in `{subterm}`: expected {expected}, found {found}")]
pub struct SortError {
    pub subterm: String,
    pub expected: Sort,
    pub found: Sort,
}

impl SortError {
    pub fn new(subterm: impl Into<String>, expected: Sort, found: Sort) -> SortError {
        SortError {
            subterm: subterm.into(),
            expected,
            found,
        }
    }
}

/// A path that leaves the tree.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("path {path} is dangling after {depth} steps")]
pub struct PathError {
    pub path: String,
    pub depth: usize,
}

/// Anything the text front ends can reject.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Sort(#[from] SortError),
}

/// Errors raised while building rule instances.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InstantiateError {
    #[error("metavariable {0} is unbound")]
    Unbound(String),
    #[error("metavariable {var} bound to a value of the wrong kind")]
    Kind { var: String },
    #[error(transparent)]
    Sort(#[from] SortError),
}

/// Errors of the proof-file reader.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProofFileError {
    #[error("proof file syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("in sequent \"{text}\": {source}")]
    Sequent { text: String, source: ParseError },
}
