use std::process::ExitCode;

use thiserror::Error;

/// Exit statuses. Usage errors (2) are raised by the argument parser.
pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SCHEMA: u8 = 3;
pub const EXIT_SYMMETRY: u8 = 4;
pub const EXIT_PRECONDITION: u8 = 5;
pub const EXIT_CERTIFICATION: u8 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{context}: {source}")]
    Symmetry {
        context: String,
        #[source]
        source: mindlin_core::Error,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The report was written but the numerical check it carries failed.
    #[error("certification failed: {0}")]
    Certification(String),

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Other(_) => EXIT_IO,
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Symmetry { .. } => EXIT_SYMMETRY,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Certification(_) => EXIT_CERTIFICATION,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    /// Maps a library error raised while handling `context`.
    pub fn from_core(context: &str, e: mindlin_core::Error) -> Self {
        use mindlin_core::Error as E;
        match e {
            E::Symmetry { .. } => CliError::Symmetry {
                context: context.to_string(),
                source: e,
            },
            E::Singular { .. } | E::Indefinite { .. } | E::Containment(_) | E::TrivialKernel => {
                CliError::Precondition(format!("{context}: {e}"))
            }
            _ => CliError::Schema(format!("{context}: {e}")),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
