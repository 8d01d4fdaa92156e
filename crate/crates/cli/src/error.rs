use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const IO: i32 = 2;
    pub const VALIDATION: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => exit::IO,
            CliError::Validation(_) => exit::VALIDATION,
        }
    }
}

impl From<qtele_core::Error> for CliError {
    fn from(e: qtele_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
