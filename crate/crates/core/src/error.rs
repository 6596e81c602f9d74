use thiserror::Error;

use crate::syntax::Name;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{col}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, expected: Vec<String>, found: String) -> Self {
        ParseError { line, col, expected, found }
    }

    /// Re-anchors an error produced from a single line of a larger file.
    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

/// Failures of the cell kernel that are not syntax errors.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unbound path variable `{0}`")]
    Unbound(Name),
    #[error("a dimension-0 cell has no boundary")]
    NoBoundary,
    #[error("not a redex: {0}")]
    NotARedex(String),
    #[error("invalid redex position: {0}")]
    InvalidPosition(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("`{binder}` occurs free in the contracted cell; it must not depend on the binder")]
    Freshness { binder: Name },
    #[error("cell is not well-formed: {0}")]
    IllFormed(String),
    #[error("inputs are not parallel: {0}")]
    NotParallel(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(Name),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
