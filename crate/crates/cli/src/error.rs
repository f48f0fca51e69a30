use std::path::PathBuf;

use thiserror::Error;

/// Exit statuses of the `ballcert` binary.
pub mod exit {
    pub const VERIFIED: i32 = 0;
    pub const COUNTEREXAMPLE: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const IO: i32 = 74;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] ballcert_core::error::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write standard output: {0}")]
    Stdout(#[source] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => exit::USAGE,
            CliError::Io { .. } | CliError::Stdout(_) | CliError::Csv(_) | CliError::Json(_) => exit::IO,
        }
    }
}
