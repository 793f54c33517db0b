use thiserror::Error;

/// Errors raised by matrix construction, algebra and the search engines.
///
/// Indices carried by the variants are 1-based, matching the text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix order must be between 1 and {max}, got {got}")]
    InvalidOrder { got: usize, max: usize },

    #[error("order mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("elementary matrix needs distinct indices, got ({0},{0})")]
    DiagonalElementary(usize),

    #[error("empty matrix text")]
    EmptyText,

    #[error("line {line}: expected {expected} characters, found {found}")]
    RaggedLine {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column {column}: unexpected character {ch:?}")]
    ForeignCharacter {
        line: usize,
        column: usize,
        ch: char,
    },

    #[error("diagonal entry ({0},{0}) must be '0'")]
    NonzeroDiagonal(usize),

    #[error("bad family atom {0:?}; expected V:p,q, W:p,q or Z:p,q")]
    BadAtom(String),

    #[error("{what} requires order <= {max}, got {got}")]
    TooLarge {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("{0}")]
    Precondition(String),

    #[error("search inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
