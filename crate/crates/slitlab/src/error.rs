use std::path::PathBuf;

use slitlab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed artifact {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("verdict failed: {0}")]
    Verdict(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// Process exit status: 2 for rejected configuration, 3 for a numeric
    /// abort, 4 for a failed verdict, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Core(CoreError::InvalidInput(_) | CoreError::Unstable(_)) => 2,
            AppError::Core(CoreError::NumericAbort { .. }) => 3,
            AppError::Verdict(_) => 4,
            _ => 1,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
