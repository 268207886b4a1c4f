use std::fmt::Display;

use sympsim_core::Error;

pub const INPUT: u8 = 1;
pub const RUNTIME: u8 = 2;
pub const VERIFY: u8 = 3;

/// A diagnostic for stderr paired with the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Display) -> Self {
        Self { code: INPUT, message: message.to_string() }
    }

    pub fn runtime(message: impl Display) -> Self {
        Self { code: RUNTIME, message: message.to_string() }
    }

    pub fn verify(message: impl Display) -> Self {
        Self { code: VERIFY, message: message.to_string() }
    }

    /// Classifies a library error raised while validating inputs: problems
    /// with the supplied data are input errors, the rest runtime errors.
    pub fn from_validation(e: Error) -> Self {
        match e {
            Error::NotHermitian { .. }
            | Error::OddDimension(_)
            | Error::NotSquare { .. }
            | Error::NonFinite(_)
            | Error::DimMismatch { .. }
            | Error::InvalidInterval { .. }
            | Error::InvalidConfig(_)
            | Error::Malformed(_)
            | Error::Parse(_)
            | Error::Json(_) => Self::input(e),
            other => Self::runtime(other),
        }
    }
}

pub fn read_input(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}
