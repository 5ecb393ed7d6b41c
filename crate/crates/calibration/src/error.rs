use economy_core::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("design matrix is rank deficient (smallest singular value {smallest:.3e}, largest {largest:.3e})")]
    Collinear { smallest: f64, largest: f64 },
    #[error("no convergence: slope {slope} is not negative")]
    NoConvergence { slope: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("density not identified: {0}")]
    Unidentified(String),
    #[error("panel header mismatch: expected {expected:?}, found {found:?}")]
    Header { expected: Vec<String>, found: Vec<String> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CalibrationError>;
