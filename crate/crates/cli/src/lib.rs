//! Command implementations behind the `qunit` binary.
//!
//! Exit codes: 0 success, 2 input error, 3 not universal, 4 capability
//! (a gate cannot realize a needed negative power), 5 verification failure.

pub mod commands;
pub mod formats;

use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_UNIVERSAL: u8 = 3;
pub const EXIT_CAPABILITY: u8 = 4;
pub const EXIT_VERIFY: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Capability(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Capability(_) => EXIT_CAPABILITY,
            Self::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl From<qunit_core::Error> for CliError {
    fn from(e: qunit_core::Error) -> Self {
        match e {
            qunit_core::Error::Capability { .. } => Self::Capability(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Input(e.to_string())
    }
}
