//! Majority aggregation and solution accuracy.

use serde::{Deserialize, Serialize};

use crate::params::{EffortProfile, Params};

/// A binary reported solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Report {
    Positive,
    Negative,
}

impl Report {
    pub fn value(self) -> i8 {
        match self {
            Report::Positive => 1,
            Report::Negative => -1,
        }
    }

    pub fn from_sign(positive: bool) -> Self {
        if positive {
            Report::Positive
        } else {
            Report::Negative
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Report::Positive => Report::Negative,
            Report::Negative => Report::Positive,
        }
    }
}

/// Majority rule over two reports; a tie takes the caller's fair-coin draw.
pub fn majority(high: Report, low: Report, tiebreak: Report) -> Report {
    match high.value() + low.value() {
        s if s > 0 => Report::Positive,
        s if s < 0 => Report::Negative,
        _ => tiebreak,
    }
}

/// Probability that a member's own solution is correct.
pub fn member_accuracy(exerts: bool, params: &Params) -> f64 {
    if exerts {
        params.effort_accuracy
    } else {
        0.5
    }
}

/// Probability that the majority-aggregated team solution is correct.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TeamAccuracy(pub f64);

impl TeamAccuracy {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Team accuracy as a function of how many members exert effort:
/// `1/2`, `(2a+1)/4` or `a`.
pub fn team_accuracy(effort: EffortProfile, params: &Params) -> TeamAccuracy {
    let a = params.effort_accuracy;
    TeamAccuracy(match effort.count() {
        0 => 0.5,
        1 => (2.0 * a + 1.0) / 4.0,
        _ => a,
    })
}
