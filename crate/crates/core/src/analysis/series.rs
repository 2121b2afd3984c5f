use serde::{Deserialize, Serialize};

use super::Range;
use crate::error::{AnalysisError, SolveError};
use crate::game::{solve_spe_with, SolverOptions};
use crate::params::{MechanismKind, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesAxis {
    /// Vary effort cost at fixed volume.
    C,
    /// Vary volume at fixed effort cost.
    D,
}

/// One point of a one-dimensional slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub accuracy: f64,
    pub welfare: f64,
    pub label: String,
}

/// Equilibrium accuracy and welfare along one axis, the other held at
/// `fixed_value`.
pub fn series(
    mechanism: MechanismKind,
    params: &Params,
    axis: SeriesAxis,
    fixed_value: f64,
    range: Range,
    options: SolverOptions,
) -> Result<Vec<SeriesPoint>, AnalysisError> {
    range.validate(match axis {
        SeriesAxis::C => "c",
        SeriesAxis::D => "D",
    })?;
    range
        .points()
        .into_iter()
        .map(|x| {
            let p = match axis {
                SeriesAxis::C => params.with_cost(x).with_volume(fixed_value),
                SeriesAxis::D => params.with_cost(fixed_value).with_volume(x),
            };
            solve_spe_with(mechanism, &p, options).map(|o| SeriesPoint {
                x,
                accuracy: o.team_accuracy,
                welfare: o.welfare,
                label: o.label(),
            })
        })
        .collect::<Result<Vec<_>, SolveError>>()
        .map_err(AnalysisError::from)
}

pub fn is_non_increasing(values: &[f64], tolerance: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + tolerance)
}

pub fn is_constant(values: &[f64], tolerance: f64) -> bool {
    values.iter().all(|v| (v - values[0]).abs() <= tolerance)
}

/// True when the sequence never rises again once it has fallen. Flat
/// stretches are allowed anywhere.
pub fn is_unimodal(values: &[f64], tolerance: f64) -> bool {
    let mut falling = false;
    for w in values.windows(2) {
        if w[1] < w[0] - tolerance {
            falling = true;
        } else if w[1] > w[0] + tolerance && falling {
            return false;
        }
    }
    true
}
