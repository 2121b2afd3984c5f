use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Range;
use crate::error::{AnalysisError, SolveError};
use crate::game::{solve_spe_with, EquilibriumOutcome, SolverOptions};
use crate::params::{MechanismKind, Params};

/// Label of a cell whose game has no pure subgame-perfect equilibrium.
pub const NO_PURE_LABEL: &str = "no-pure-equilibrium";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub c: f64,
    pub volume: f64,
    pub outcome: Result<EquilibriumOutcome, SolveError>,
}

impl SweepCell {
    pub fn label(&self) -> String {
        match &self.outcome {
            Ok(o) => o.label(),
            Err(_) => NO_PURE_LABEL.to_string(),
        }
    }
}

/// Equilibria on a rectangular `(c, D)` lattice for one mechanism.
///
/// Cells are stored row-major with `D` as the row index.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub mechanism: MechanismKind,
    pub base: Params,
    pub c_axis: Vec<f64>,
    pub d_axis: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    mechanism: &'a str,
    c: f64,
    #[serde(rename = "D")]
    volume: f64,
    label: String,
    accuracy: Option<f64>,
    welfare: Option<f64>,
    u_high: Option<f64>,
    u_low: Option<f64>,
}

/// Heat-map friendly document: both axes plus a label matrix indexed
/// `[D index][c index]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub mechanism: String,
    pub base: Params,
    pub c_axis: Vec<f64>,
    pub d_axis: Vec<f64>,
    pub legend: Vec<String>,
    /// Indices into `legend`.
    pub regions: Vec<Vec<usize>>,
    pub labels: Vec<Vec<String>>,
}

impl SweepGrid {
    pub fn cell(&self, c_index: usize, d_index: usize) -> &SweepCell {
        &self.cells[d_index * self.c_axis.len() + c_index]
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &EquilibriumOutcome> {
        self.cells.iter().filter_map(|c| c.outcome.as_ref().ok())
    }

    /// Cell count per label, sorted by label.
    pub fn histogram(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for cell in &self.cells {
            *out.entry(cell.label()).or_insert(0) += 1;
        }
        out
    }

    pub fn distinct_labels(&self) -> Vec<String> {
        self.histogram().into_keys().collect()
    }

    pub fn label_matrix(&self) -> Vec<Vec<String>> {
        (0..self.d_axis.len())
            .map(|j| (0..self.c_axis.len()).map(|i| self.cell(i, j).label()).collect())
            .collect()
    }

    pub fn region_map(&self) -> RegionMap {
        let legend = self.distinct_labels();
        let labels = self.label_matrix();
        let regions = labels
            .iter()
            .map(|row| {
                row.iter()
                    .map(|l| legend.binary_search(l).expect("label is in legend"))
                    .collect()
            })
            .collect();
        RegionMap {
            mechanism: self.mechanism.name().to_string(),
            base: self.base,
            c_axis: self.c_axis.clone(),
            d_axis: self.d_axis.clone(),
            legend,
            regions,
            labels,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), AnalysisError> {
        let mut w = csv::Writer::from_writer(writer);
        for cell in &self.cells {
            let ok = cell.outcome.as_ref().ok();
            w.serialize(CsvRow {
                mechanism: self.mechanism.name(),
                c: cell.c,
                volume: cell.volume,
                label: cell.label(),
                accuracy: ok.map(|o| o.team_accuracy),
                welfare: ok.map(|o| o.welfare),
                u_high: ok.map(|o| o.payoffs.high),
                u_low: ok.map(|o| o.payoffs.low),
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_region_map<W: Write>(&self, writer: W) -> Result<(), AnalysisError> {
        serde_json::to_writer_pretty(writer, &self.region_map())?;
        Ok(())
    }
}

/// Solves the two-stage game at every lattice point. Cells are solved in
/// parallel and stored in lattice order.
pub fn sweep(
    mechanism: MechanismKind,
    params: &Params,
    c_range: Range,
    d_range: Range,
    options: SolverOptions,
) -> Result<SweepGrid, AnalysisError> {
    c_range.validate("c")?;
    d_range.validate("D")?;
    let c_axis = c_range.points();
    let d_axis = d_range.points();
    let cells = (0..c_axis.len() * d_axis.len())
        .into_par_iter()
        .map(|k| {
            let c = c_axis[k % c_axis.len()];
            let volume = d_axis[k / c_axis.len()];
            let p = params.with_cost(c).with_volume(volume);
            SweepCell {
                c,
                volume,
                outcome: solve_spe_with(mechanism, &p, options),
            }
        })
        .collect();
    Ok(SweepGrid {
        mechanism,
        base: *params,
        c_axis,
        d_axis,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ZeroShapleyRule;

    fn base() -> Params {
        Params::new(0.8, 0.18, 0.15, 2.0, 1.0)
    }

    #[test]
    fn ea_has_three_vertical_stripes() {
        let grid = sweep(
            MechanismKind::Ea,
            &base(),
            Range::new(0.005, 0.5, 100),
            Range::new(0.008, 0.8, 40),
            SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(grid.distinct_labels().len(), 3);
        for i in 0..grid.c_axis.len() {
            let first = grid.cell(i, 0).label();
            for j in 0..grid.d_axis.len() {
                assert_eq!(grid.cell(i, j).label(), first);
            }
        }
    }

    #[test]
    fn cell_layout_and_exports() {
        let grid = sweep(
            MechanismKind::Sv(ZeroShapleyRule::EqualSplit),
            &base(),
            Range::new(0.1, 0.4, 4),
            Range::new(0.1, 0.3, 3),
            SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(grid.cells.len(), 12);
        let cell = grid.cell(3, 2);
        assert!((cell.c - 0.4).abs() < 1e-15 && (cell.volume - 0.3).abs() < 1e-15);

        let mut csv = Vec::new();
        grid.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "mechanism,c,D,label,accuracy,welfare,u_high,u_low");
        assert_eq!(lines.count(), 12);

        let map = grid.region_map();
        assert_eq!(map.labels.len(), 3);
        assert_eq!(map.labels[0].len(), 4);
        assert_eq!(map.legend[map.regions[2][3]], map.labels[2][3]);
    }

    #[test]
    fn rejects_bad_ranges() {
        let err = sweep(
            MechanismKind::Ea,
            &base(),
            Range::new(0.1, 0.1, 5),
            Range::new(0.1, 0.3, 3),
            SolverOptions::default(),
        );
        assert!(matches!(err, Err(AnalysisError::InvalidRange { axis: "c", .. })));
    }
}
