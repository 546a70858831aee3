use thiserror::Error;

/// Crate-wide error type. Every fallible operation returns one of these;
/// nothing panics on malformed user input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("level index {index} out of range for n = {n}")]
    LevelOutOfRange { index: usize, n: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("function must have n >= 1 (got {0} levels)")]
    TooFewLevels(usize),

    #[error("level values must be +1 or -1 (offending value {0})")]
    BadLevelValue(i64),

    #[error("oracle cap exceeded: n = {n} > cap = {cap}")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("truth table length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("operation needs at least two variables (n = {0})")]
    NeedTwoVariables(usize),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("input length {got} does not match n = {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("tree export requires a materialized tree (n <= {0})")]
    TreeNotMaterialized(usize),

    #[error("linear program is unbounded; instance is malformed")]
    LpUnbounded,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
