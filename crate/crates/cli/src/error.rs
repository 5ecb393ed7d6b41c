use calibration::CalibrationError;
use economy_core::ModelError;
use equilibrium_analysis::AnalysisError;
use pde_dynamics::SolverError;
use thiserror::Error;
use wasserstein_jko::OtError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("timeout: {0}")]
    Timeout(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::Timeout(_) => 4,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.as_ref().display().to_string();
        move |source| CliError::Io { path, source }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Config(_) => CliError::Config(e.to_string()),
            ModelError::Domain(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Model(m) => m.into(),
            SolverError::Config(_) => CliError::Config(e.to_string()),
            SolverError::Timeout { .. } => CliError::Timeout(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<OtError> for CliError {
    fn from(e: OtError) -> Self {
        match e {
            OtError::Model(m) => m.into(),
            OtError::Config(_) | OtError::Measure(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Model(m) => m.into(),
            AnalysisError::Config(_) => CliError::Config(e.to_string()),
            AnalysisError::DegenerateFit(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        match e {
            CalibrationError::Model(m) => m.into(),
            CalibrationError::Config(_) | CalibrationError::Header { .. } | CalibrationError::Io(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
