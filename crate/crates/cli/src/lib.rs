//! Claim-by-claim verification of the Möbius foliation computations.

pub mod claims;
pub mod commands;
pub mod config;

pub use claims::{run_single, run_verify_all, ClaimReport, Provenance, VerifyReport, CLAIM_IDS};
pub use config::{Config, OutputFormat};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mobius_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// `2` for usage and configuration problems, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
