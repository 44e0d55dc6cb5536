//! Command-line front end for `tmq-core`: scans, tables and plot data in
//! CSV or JSON.

pub mod args;
pub mod commands;
pub mod config;
pub mod grid;
pub mod output;
pub mod weights;

use std::io;

/// Process exit status for a usage or parse error.
pub const EXIT_USAGE: u8 = 1;
/// Process exit status when a numerical check fails.
pub const EXIT_NUMERICAL: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

impl From<tmq_core::Error> for CliError {
    fn from(e: tmq_core::Error) -> Self {
        use tmq_core::Error as E;
        match e {
            E::NonIntegralClassNumber { .. }
            | E::HuaBound { .. }
            | E::TransferMismatch { .. }
            | E::CoquetRemainder { .. }
            | E::AperiodicPhase(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
