use qhatm_core::QhatmError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed problem document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] QhatmError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Process exit status: 2 usage, 3 domain/numeric, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 4,
            Error::Usage(_) | Error::Json(_) => 2,
            Error::Core(e) => match e {
                QhatmError::OrderOutOfRange { .. }
                | QhatmError::InvalidParams(_)
                | QhatmError::MissingCoordinate(_)
                | QhatmError::InvalidGrid(_)
                | QhatmError::UnknownProblem(_)
                | QhatmError::InvalidSpec(_)
                | QhatmError::UnknownFactor(_)
                | QhatmError::DimensionMismatch { .. } => 2,
                _ => 3,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
