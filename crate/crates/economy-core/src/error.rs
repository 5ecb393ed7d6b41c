use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(ModelError::Config(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(ModelError::Domain(msg.into()))
}
