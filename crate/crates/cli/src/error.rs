use std::fmt;
use std::process::ExitCode;

use swkb_core::LabError;

/// 0 = every check passed, 1 = checks ran and failed, 2 = bad input.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Failed(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn io(e: impl fmt::Display) -> Self {
        CliError::Invalid(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Invalid(_) => ExitCode::from(2),
            CliError::Failed(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "error: {m}"),
            CliError::Failed(m) => write!(f, "check failed: {m}"),
        }
    }
}

/// Numerical failures count as failed checks; everything else is bad input.
impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Bracket(_)
            | LabError::DegenerateTurningPoint { .. }
            | LabError::NegativeRadicand { .. }
            | LabError::NotConverged(_)
            | LabError::BoxTooSmall(_) => CliError::Failed(e.to_string()),
            LabError::Domain { .. }
            | LabError::UnknownParameter { .. }
            | LabError::Validity(_)
            | LabError::NoZeroCrossing(_)
            | LabError::NoAlgebraicSpectrum(_)
            | LabError::InvalidConfig(_) => CliError::Invalid(e.to_string()),
        }
    }
}
