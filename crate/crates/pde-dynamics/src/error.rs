use economy_core::ModelError;
use thiserror::Error;

use crate::trajectory::Trajectory;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("step rejected: density would become non-positive at cell {cell} (dt = {dt:e})")]
    StepRejected { dt: f64, cell: usize },
    #[error("stiffness: positivity retries drove dt to {dt:e} at t = {t}")]
    Stiff { t: f64, dt: f64 },
    #[error("step budget of {steps} exhausted at t = {t}")]
    Timeout { steps: usize, t: f64, partial: Box<Trajectory> },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, SolverError>;
