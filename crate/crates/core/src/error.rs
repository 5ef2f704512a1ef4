use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation of [{n}]: {reason}")]
    NotBijection { n: usize, reason: String },

    #[error("inconsistent cycle structure {counts:?}: sum of i*l_i is {sum}, expected {n}")]
    InconsistentStructure { counts: Vec<u32>, sum: usize, n: usize },

    #[error("cycle structures differ: {left} vs {right}")]
    StructureMismatch { left: String, right: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("symbol {symbol} out of range at row {row}, column {col} (order {n})")]
    SymbolOutOfRange { row: usize, col: usize, symbol: usize, n: usize },

    #[error("duplicate in row {0}")]
    DuplicateInRow(usize),

    #[error("duplicate in column {0}")]
    DuplicateInColumn(usize),

    #[error("order {n} exceeds the supported bound {max} for {what}")]
    OrderTooLarge { n: usize, max: usize, what: &'static str },

    #[error("search budget of {budget} steps exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("b*k = {bk} is not divisible by v = {v}")]
    NonIntegralReplication { bk: u64, v: u64 },

    #[error("block multiplicities differ: {sizes:?}")]
    UnequalMultiplicity { sizes: Vec<usize> },

    #[error("replication differs inside one class: {0}")]
    Irregular(String),

    #[error("invalid subrectangle dimensions {rows}x{cols}")]
    InvalidDimensions { rows: usize, cols: usize },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
