use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fca_rises::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for bad input, 3 for exhausted limits, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_resource_error() => 3,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(fca_rises::Error::InvalidLattice(_)) => 2,
            CliError::Core(_) => 1,
            CliError::Io { .. } | CliError::Usage(_) => 2,
        }
    }
}
