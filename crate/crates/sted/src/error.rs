use sted_core::consistency::ConsistencyError;
use sted_core::semantic::SimilarityError;
use sted_core::sted::StedError;
use sted_core::variation::VariationError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_THRESHOLD: i32 = 3;
pub const EXIT_PROVIDER: i32 = 4;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Provider(String),
    #[error("{0}")]
    Internal(String),
    #[error("score {score} is below threshold {threshold}")]
    Threshold { score: f64, threshold: f64 },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => EXIT_INPUT,
            Error::Provider(_) => EXIT_PROVIDER,
            Error::Internal(_) => EXIT_INTERNAL,
            Error::Threshold { .. } => EXIT_THRESHOLD,
        }
    }

    pub fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        Error::Input(format!("{context}: {err}"))
    }

    pub fn internal(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        Error::Internal(format!("{context}: {err}"))
    }
}

impl From<StedError> for Error {
    fn from(e: StedError) -> Self {
        match e {
            StedError::Similarity(SimilarityError::Provider(p)) => Error::Provider(p.to_string()),
            StedError::InvalidConfig(_) => Error::Input(e.to_string()),
            other => Error::Internal(other.to_string()),
        }
    }
}

impl From<ConsistencyError> for Error {
    fn from(e: ConsistencyError) -> Self {
        match e {
            ConsistencyError::Sted(s) => s.into(),
            other => Error::Input(other.to_string()),
        }
    }
}

impl From<VariationError> for Error {
    fn from(e: VariationError) -> Self {
        Error::Input(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
