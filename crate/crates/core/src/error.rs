use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("size cap exceeded for {what}: needs {required} bytes, cap is {cap} bytes")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u64,
    },

    #[error("rank {rank} does not divide dimension {n}")]
    RankDoesNotDivide { n: usize, rank: usize },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
