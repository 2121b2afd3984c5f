use std::fmt;
use std::process::ExitCode;

use elicit_core::SolveError;

#[derive(Debug)]
pub enum CliError {
    /// Missing or invalid flags or config.
    Usage(String),
    /// One or more verification checks failed.
    Verification(usize),
    NoPureEquilibrium(SolveError),
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::NoPureEquilibrium(_) => 3,
            CliError::Io(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Verification(n) => write!(f, "{n} verification check(s) failed"),
            CliError::NoPureEquilibrium(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<elicit_core::AnalysisError> for CliError {
    fn from(e: elicit_core::AnalysisError) -> Self {
        use elicit_core::AnalysisError as A;
        match e {
            A::InvalidRange { .. } | A::InvalidTolerance(_) | A::MismatchedGrids => CliError::Usage(e.to_string()),
            A::Solve(s) => CliError::NoPureEquilibrium(s),
            other => CliError::Io(other.into()),
        }
    }
}
