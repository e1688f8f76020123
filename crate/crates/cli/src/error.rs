use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] subflat::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(path: &str, line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { path: path.to_string(), line, message: message.into() }
    }

    /// 2 for degenerate input, 3 for parse and budget errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_degenerate() => 2,
            CliError::Core(subflat::Error::BudgetExceeded { .. }) | CliError::Parse { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
