use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input does not match the documented file schema.
    #[error("parse error at row {row}, field `{field}`: {message}")]
    Parse {
        row: usize,
        field: String,
        message: String,
    },

    /// Input parsed but violates a value constraint.
    #[error("validation error for participant `{participant}`, `{field}`: {message}")]
    Validation {
        participant: String,
        field: String,
        message: String,
    },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero variance in `{0}`")]
    ZeroVariance(String),

    #[error("singular design matrix")]
    SingularDesign,

    #[error("no candidate model could be fitted: {0}")]
    NoCandidate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(
        participant: impl Into<String>,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Validation {
            participant: participant.into(),
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input data, as opposed to I/O.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Validation { .. } | Error::Json(_) | Error::Csv(_)
        )
    }
}
