use economy_core::ModelError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OtError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid measure: {0}")]
    Measure(String),
    #[error("grid too large for the exhaustive oracle: {cells} cells (limit {limit})")]
    TooLarge { cells: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, OtError>;
