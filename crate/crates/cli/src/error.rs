use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input data, arguments or configuration.
    #[error("{0}")]
    Validation(String),
    /// Missing credentials or other runtime environment problems.
    #[error("{0}")]
    Environment(String),
    /// The remote endpoint could not produce usable results.
    #[error("{0}")]
    Remote(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Environment(_) => 3,
            CliError::Remote(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<formanet_core::Error> for CliError {
    fn from(e: formanet_core::Error) -> Self {
        match e {
            formanet_core::Error::Io(io) => CliError::Io(io),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub type Result<T> = std::result::Result<T, CliError>;
