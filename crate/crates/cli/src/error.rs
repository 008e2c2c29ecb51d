use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A parameter fails a precondition checked before dispatch.
    #[error("invalid argument: {0}")]
    Validation(String),
    /// The library rejected the inputs.
    #[error(transparent)]
    Core(#[from] worst_hedge::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Encode(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
