use serde::{Deserialize, Serialize};

use super::linspace;
use crate::error::AnalysisError;
use crate::game::{solve_spe_with, SolverOptions};
use crate::params::{ContributionProfile, MechanismKind, Params};

/// Lattice points used to bracket the contribution region before bisecting.
pub const BOUNDARY_SCAN_POINTS: usize = 400;

/// Volumes at which some member starts and stops contributing in
/// equilibrium, at a fixed effort cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryEstimate {
    /// No volume in `(0, d_max]` induces a contribution equilibrium.
    Absent { c: f64 },
    /// Contributions happen for volumes in `[d_low_hat, d_high_hat]`. When the
    /// region reaches the scan edge, `d_high_hat` equals `d_max`.
    Interval { c: f64, d_low_hat: f64, d_high_hat: f64 },
    /// The region is not a single interval; the raw scan is returned.
    NonMonotone { c: f64, scan: Vec<(f64, String)> },
}

impl BoundaryEstimate {
    pub fn interval(&self) -> Option<(f64, f64)> {
        match *self {
            BoundaryEstimate::Interval { d_low_hat, d_high_hat, .. } => Some((d_low_hat, d_high_hat)),
            _ => None,
        }
    }
}

/// Locates the entry and exit volumes of the contribution equilibrium at
/// effort cost `c` to within `tol`: a lattice scan over `(0, d_max]`
/// brackets each edge, then bisection refines it.
///
/// With `target` set, only equilibria with exactly that contribution profile
/// count as inside the region; otherwise any contribution does.
pub fn find_boundaries(
    mechanism: MechanismKind,
    params: &Params,
    c: f64,
    d_max: f64,
    tol: f64,
    target: Option<ContributionProfile>,
    options: SolverOptions,
) -> Result<BoundaryEstimate, AnalysisError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(AnalysisError::InvalidTolerance(tol));
    }
    if !d_max.is_finite() || d_max <= 0.0 {
        return Err(AnalysisError::InvalidRange {
            axis: "D",
            reason: format!("d_max must be positive, got {d_max}"),
        });
    }
    let base = params.with_cost(c);
    let solve = |volume: f64| solve_spe_with(mechanism, &base.with_volume(volume), options);
    let contributes = |volume: f64| {
        solve(volume)
            .map(|o| match target {
                Some(t) => o.contribution == t,
                None => o.contribution.any(),
            })
            .unwrap_or(false)
    };

    let step = d_max / BOUNDARY_SCAN_POINTS as f64;
    let grid = linspace(step, d_max, BOUNDARY_SCAN_POINTS);
    let inside: Vec<bool> = grid.iter().map(|&v| contributes(v)).collect();

    let entries = inside
        .iter()
        .enumerate()
        .filter(|&(k, &v)| v && (k == 0 || !inside[k - 1]))
        .count();
    if entries == 0 {
        return Ok(BoundaryEstimate::Absent { c });
    }
    if entries > 1 {
        let scan = grid
            .iter()
            .map(|&v| {
                let label = solve(v).map(|o| o.label()).unwrap_or_else(|_| super::NO_PURE_LABEL.to_string());
                (v, label)
            })
            .collect();
        return Ok(BoundaryEstimate::NonMonotone { c, scan });
    }

    let first = inside.iter().position(|&v| v).expect("one entry");
    let last = inside.iter().rposition(|&v| v).expect("one entry");

    // Bisect on brackets (outside, inside); the volume 0 is taken as outside.
    let bisect = |mut out: f64, mut inn: f64| {
        while (inn - out).abs() > tol {
            let mid = 0.5 * (out + inn);
            if contributes(mid) {
                inn = mid;
            } else {
                out = mid;
            }
        }
        0.5 * (out + inn)
    };
    let d_low_hat = bisect(if first == 0 { 0.0 } else { grid[first - 1] }, grid[first]);
    let d_high_hat = if last + 1 == grid.len() {
        d_max
    } else {
        bisect(grid[last + 1], grid[last])
    };
    Ok(BoundaryEstimate::Interval { c, d_low_hat, d_high_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ZeroShapleyRule;

    fn base() -> Params {
        Params::new(0.8, 0.18, 0.15, 2.0, 1.0)
    }

    #[test]
    fn oa_thresholds_at_moderate_cost() {
        // L joins effort once 0.15 + 0.09 D >= 0.18; H keeps contributing
        // while 1.42 - 0.66 D >= 1.12.
        let est = find_boundaries(MechanismKind::Oa, &base(), 0.18, 0.8, 1e-4, None, SolverOptions::default()).unwrap();
        let (lo, hi) = est.interval().expect("interval");
        assert!((lo - 1.0 / 3.0).abs() < 1e-4, "{lo}");
        assert!((hi - 0.3 / 0.66).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn absent_regions() {
        let opts = SolverOptions::default();
        let oa = find_boundaries(MechanismKind::Oa, &base(), 0.12, 0.8, 1e-4, None, opts).unwrap();
        assert_eq!(oa, BoundaryEstimate::Absent { c: 0.12 });
        for c in [0.1, 0.2, 0.35] {
            let ea = find_boundaries(MechanismKind::Ea, &base(), c, 0.8, 1e-4, None, opts).unwrap();
            assert!(matches!(ea, BoundaryEstimate::Absent { .. }));
        }
    }

    #[test]
    fn sv_has_two_contribution_regions_above_high_threshold() {
        let sv = MechanismKind::Sv(ZeroShapleyRule::EqualSplit);
        let opts = SolverOptions::default();
        let any = find_boundaries(sv, &base(), 0.32, 0.8, 1e-5, None, opts).unwrap();
        assert!(matches!(any, BoundaryEstimate::NonMonotone { .. }), "{any:?}");

        // Low member funds the high one: H exerts once 1.3 + D - c >= 1 + D/2,
        // L keeps contributing while 0.65 - D >= 0.5.
        let low_funds = ContributionProfile::new(false, true);
        let est = find_boundaries(sv, &base(), 0.32, 0.8, 1e-5, Some(low_funds), opts).unwrap();
        let (lo, hi) = est.interval().expect("interval");
        assert!((lo - 0.04).abs() < 1e-4, "{lo}");
        assert!((hi - 0.15).abs() < 1e-4, "{hi}");

        // High member funds both efforts: 0.15 + D/2 >= 0.32 and 1.28 - D/2 >= 1.
        let high_funds = ContributionProfile::new(true, false);
        let est = find_boundaries(sv, &base(), 0.32, 0.8, 1e-5, Some(high_funds), opts).unwrap();
        let (lo, hi) = est.interval().expect("interval");
        assert!((lo - 0.34).abs() < 1e-4, "{lo}");
        assert!((hi - 0.56).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn rejects_bad_tolerance() {
        let r = find_boundaries(MechanismKind::Oa, &base(), 0.18, 0.8, 0.0, None, SolverOptions::default());
        assert!(matches!(r, Err(AnalysisError::InvalidTolerance(_))));
    }
}
