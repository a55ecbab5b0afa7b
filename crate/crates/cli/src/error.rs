use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] expsum_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use expsum_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io { .. } => EXIT_INPUT,
            CliError::Core(e) => match e {
                E::Inconsistent(_) | E::RootFinding { .. } => EXIT_VERIFICATION,
                // Unsupported is reported as a status, never as an error exit
                E::Unsupported(_) => EXIT_OK,
                _ => EXIT_INPUT,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
