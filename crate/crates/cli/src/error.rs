use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] cespdc::Error),

    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        use cespdc::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 4,
            CliError::VerifyFailed => 1,
            CliError::Model(e) => match e {
                E::AboveThreshold { .. } => 3,
                E::Convergence { .. } => 5,
                E::Domain { .. } | E::DegenerateComb => 2,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
