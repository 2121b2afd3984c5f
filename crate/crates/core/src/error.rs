use thiserror::Error;

use crate::game::Stage;
use crate::params::ContributionProfile;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("parameter {name} is not finite: {value}")]
pub struct NonFiniteParam {
    pub name: &'static str,
    pub value: f64,
}

/// Some subgame (or the contribution stage) has no pure Nash equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no pure equilibrium in the effort stage after contributions {0}")]
    NoPureEffortEquilibrium(ContributionProfile),
    #[error("no pure equilibrium in the contribution stage")]
    NoPureContributionEquilibrium,
}

impl SolveError {
    pub fn stage(&self) -> Stage {
        match self {
            SolveError::NoPureEffortEquilibrium(_) => Stage::Effort,
            SolveError::NoPureContributionEquilibrium => Stage::Contribution,
        }
    }
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid range for {axis}: {reason}")]
    InvalidRange { axis: &'static str, reason: String },
    #[error("grids do not share axes and base parameters")]
    MismatchedGrids,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
