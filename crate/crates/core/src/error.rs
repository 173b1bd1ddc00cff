use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown function id {0}")]
    UnknownFunction(u32),
    #[error("dimension must be at least {min}, got {got}")]
    Dimension { min: usize, got: usize },
    #[error("input has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("reduced dimension m={m} must be smaller than the original dimension n={n}")]
    ReducedDimension { m: usize, n: usize },
    #[error("grid of {blocks}^{dim} cells exceeds the cell limit of {limit}")]
    GridTooLarge { blocks: usize, dim: usize, limit: u64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("unknown feature group `{0}`")]
    UnknownGroup(String),
    #[error("time budget of {0:.1} s exceeded")]
    BudgetExceeded(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
