use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cli: invalid input: {0}")]
    Validation(String),
    #[error(transparent)]
    Library(#[from] gup_oscillator::Error),
    #[error("cli: i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("cli: internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Library(e) if e.is_domain_exceeded() => ExitCode::from(3),
            CliError::Library(_) => ExitCode::from(2),
            CliError::Io(_) | CliError::Internal(_) => ExitCode::from(1),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
