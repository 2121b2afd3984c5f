//! Parameter sweeps over effort cost and incentive volume, and the analyses
//! built on them.

mod boundary;
mod compare;
mod series;
mod sweep;

pub use boundary::{find_boundaries, BoundaryEstimate, BOUNDARY_SCAN_POINTS};
pub use compare::{compare, CellComparison, DominanceReport, DOMINANCE_TOLERANCE};
pub use series::{is_constant, is_non_increasing, is_unimodal, series, SeriesAxis, SeriesPoint};
pub use sweep::{sweep, RegionMap, SweepCell, SweepGrid, NO_PURE_LABEL};

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

/// An inclusive evenly spaced lattice `start..=end` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Range { start, end, count }
    }

    /// Checks that the lattice is finite, ordered, positive and has at least
    /// two points.
    pub fn validate(&self, axis: &'static str) -> Result<(), AnalysisError> {
        let fail = |reason: String| Err(AnalysisError::InvalidRange { axis, reason });
        if !self.start.is_finite() || !self.end.is_finite() {
            return fail("bounds must be finite".into());
        }
        if self.count < 2 {
            return fail(format!("need at least 2 points, got {}", self.count));
        }
        if self.start <= 0.0 {
            return fail(format!("start must be positive, got {}", self.start));
        }
        if self.end <= self.start {
            return fail(format!("empty range {}:{}", self.start, self.end));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.count)
    }
}

pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { end } else { start + (end - start) * i as f64 / last })
                .collect()
        }
    }
}
