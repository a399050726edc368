use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Row, column and triple coordinates are reported 0-based; symbols taken
/// from external input are reported exactly as they were written (1-based).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("row {row} repeats symbol {symbol}")]
    DuplicateInRow { row: usize, symbol: usize },
    #[error("column {column} repeats symbol {symbol}")]
    DuplicateInColumn { column: usize, symbol: usize },
    #[error("cell ({row}, {column}) holds {value}, expected a symbol in 1..={n}")]
    SymbolOutOfRange {
        row: usize,
        column: usize,
        value: i64,
        n: usize,
    },
    #[error("grid shape is invalid: {0}")]
    Shape(String),
    #[error("cell ({row}, {column}) is not covered exactly once")]
    IncompleteCover { row: usize, column: usize },
    #[error("triple ({}, {}, {}) lies outside order {n}", .triple.0, .triple.1, .triple.2)]
    TripleOutOfRange {
        triple: (usize, usize, usize),
        n: usize,
    },
    #[error("triples {a:?} and {b:?} agree in two coordinates")]
    Conflict {
        a: (usize, usize, usize),
        b: (usize, usize, usize),
    },
    #[error("k = {k} is outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("a switching analysis needs at least 2 rows, got {0}")]
    KTooSmall(usize),
    #[error("line {line}: {reason}")]
    Parse {
        line: usize,
        reason: String,
        source: Option<Box<Error>>,
    },
    #[error("row is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("{count} intercalates exceed the exact-search limit of {limit}")]
    TooLargeForExact { count: usize, limit: usize },
    #[error("triples do not form a matching")]
    NotAMatching,
    #[error("requested {m} triples but only {available} are available")]
    MTooLarge { m: usize, available: usize },
    #[error("order {0} is too small")]
    NTooSmall(usize),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("completion failed after {0} restarts")]
    CompletionFailed(usize),
    #[error("h = {0} is not supported (h <= 3)")]
    HTooLarge(usize),
    #[error("switching (row {row}, columns {x}, {y}) does not yield a Latin rectangle")]
    InvalidSwitching { row: usize, x: usize, y: usize },
    #[error("threshold r must be positive")]
    RNonPositive,
    #[error("hyperedge {0:?} is not a 3-element vertex set")]
    BadEdge([usize; 3]),
    #[error("hyperedge {0:?} appears twice")]
    MultiEdge([usize; 3]),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("alpha = {0} is outside (0, 1)")]
    InvalidAlpha(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
            source: None,
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            e @ Error::Parse { .. } => e,
            other => Error::Parse {
                line,
                reason: other.to_string(),
                source: Some(Box::new(other)),
            },
        }
    }
}
