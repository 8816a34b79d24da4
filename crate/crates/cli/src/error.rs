use thiserror::Error;
use tradeoff_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Solver(_) => 3,
            Self::Io { .. } => 2,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NoRoot
            | CoreError::Solver(_)
            | CoreError::InfeasibleAccuracy { .. }
            | CoreError::UnresolvedMl => Self::Solver(e.to_string()),
            CoreError::InvalidParameter(_)
            | CoreError::CapabilityMissing(_)
            | CoreError::NonGaussian
            | CoreError::EmptyInterval { .. }
            | CoreError::InvalidPerturbation(_)
            | CoreError::Serialization(_) => Self::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
