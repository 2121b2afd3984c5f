use serde::{Deserialize, Serialize};

use super::SweepGrid;
use crate::error::AnalysisError;
use crate::params::MechanismKind;

pub const DOMINANCE_TOLERANCE: f64 = 1e-9;

/// Equilibrium accuracy and welfare of EA, OA and SV at one lattice point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellComparison {
    pub c: f64,
    #[serde(rename = "D")]
    pub volume: f64,
    pub accuracy: [f64; 3],
    pub welfare: [f64; 3],
    pub labels: [String; 3],
}

/// Counts of cells breaking `SV >= OA >= EA` in accuracy or welfare.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub cells: Vec<CellComparison>,
    pub accuracy_sv_below_oa: usize,
    pub accuracy_oa_below_ea: usize,
    pub welfare_sv_below_oa: usize,
    pub welfare_oa_below_ea: usize,
    /// Cells skipped because some mechanism has no pure equilibrium there.
    pub unsolved: usize,
}

impl DominanceReport {
    pub fn violations(&self) -> usize {
        self.accuracy_sv_below_oa + self.accuracy_oa_below_ea + self.welfare_sv_below_oa + self.welfare_oa_below_ea
    }
}

fn same_lattice(a: &SweepGrid, b: &SweepGrid) -> bool {
    a.c_axis == b.c_axis && a.d_axis == b.d_axis && a.base == b.base
}

/// Checks the ordering `SV >= OA >= EA` of equilibrium accuracy and welfare
/// at every shared lattice point.
pub fn compare(ea: &SweepGrid, oa: &SweepGrid, sv: &SweepGrid) -> Result<DominanceReport, AnalysisError> {
    let kinds_ok = matches!(ea.mechanism, MechanismKind::Ea)
        && matches!(oa.mechanism, MechanismKind::Oa)
        && matches!(sv.mechanism, MechanismKind::Sv(_));
    if !kinds_ok || !same_lattice(ea, oa) || !same_lattice(ea, sv) {
        return Err(AnalysisError::MismatchedGrids);
    }

    let mut report = DominanceReport::default();
    let below = |x: f64, y: f64| x < y - DOMINANCE_TOLERANCE;
    for ((e, o), s) in ea.cells.iter().zip(&oa.cells).zip(&sv.cells) {
        let (Ok(e_out), Ok(o_out), Ok(s_out)) = (&e.outcome, &o.outcome, &s.outcome) else {
            report.unsolved += 1;
            continue;
        };
        let accuracy = [e_out.team_accuracy, o_out.team_accuracy, s_out.team_accuracy];
        let welfare = [e_out.welfare, o_out.welfare, s_out.welfare];
        report.accuracy_sv_below_oa += below(accuracy[2], accuracy[1]) as usize;
        report.accuracy_oa_below_ea += below(accuracy[1], accuracy[0]) as usize;
        report.welfare_sv_below_oa += below(welfare[2], welfare[1]) as usize;
        report.welfare_oa_below_ea += below(welfare[1], welfare[0]) as usize;
        report.cells.push(CellComparison {
            c: e.c,
            volume: e.volume,
            accuracy,
            welfare,
            labels: [e_out.label(), o_out.label(), s_out.label()],
        });
    }
    Ok(report)
}
