use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A flag value failed validation; `flag` names it as typed.
    #[error("invalid value for {flag}: {message}")]
    Invalid { flag: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn invalid(flag: &str, message: impl Into<String>) -> Self {
        CliError::Invalid {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
