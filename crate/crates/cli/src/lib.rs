//! Command-line front end: configuration, run orchestration and table output.

pub mod config;
pub mod output;
pub mod run;

pub use config::{Flags, Format, Mode, RunConfig};
pub use run::{run, RunOutcome};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] surfcrack::Error),
    #[error("residual threshold exceeded: {0}")]
    Residual(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
