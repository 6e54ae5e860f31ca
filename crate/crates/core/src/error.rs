use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trajectory has no vertices")]
    EmptyTrajectory,

    #[error("vertex {index}: non-finite time-stamp or coordinate")]
    NonFinite { index: usize },

    #[error("vertex {index}: time-stamp {t} is not greater than previous time-stamp {prev}")]
    NonIncreasingTime { index: usize, prev: f64, t: f64 },

    #[error("side length must be positive and finite, got {0}")]
    InvalidSide(f64),

    #[error("time {t} outside trajectory span [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid window [{start}, {end}]")]
    InvalidWindow { start: f64, end: f64 },

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("queue is empty")]
    EmptyQueue,

    #[error("invalid vertex range [{i}, {j}] for {n} vertices")]
    InvalidRange { i: usize, j: usize, n: usize },

    #[error("sequence is empty")]
    EmptySequence,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
