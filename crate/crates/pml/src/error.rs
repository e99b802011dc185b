use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flag, flag value or config entry. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A verification table contains failing rows. Exit code 1.
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Parameter errors from the library are reported against the flag that
/// carries the value.
impl From<pml_core::Error> for CliError {
    fn from(err: pml_core::Error) -> Self {
        match err {
            pml_core::Error::InvalidParameter { name, value, reason } => {
                CliError::Usage(format!("invalid value {value} for --{}: {reason}", name.replace('_', "-")))
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
