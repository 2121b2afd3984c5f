//! Fully resolved commands. A job carries every input that affects its
//! output, so running the same job twice produces the same bytes.

use serde::{Deserialize, Serialize};

use elicit_core::analysis::{compare, series, sweep, Range, SeriesAxis};
use elicit_core::{
    simulate, solve_spe_with, ContributionProfile, EffortProfile, MechanismKind, Params, SimConfig, SolverOptions,
    ZeroShapleyRule,
};

use crate::error::CliError;
use crate::verify::{self, VerifyJob};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    Solve {
        mechanism: MechanismKind,
        params: Params,
        options: SolverOptions,
    },
    Sweep {
        mechanism: MechanismKind,
        params: Params,
        c_range: Range,
        d_range: Range,
        options: SolverOptions,
    },
    Series {
        mechanism: MechanismKind,
        params: Params,
        axis: SeriesAxis,
        fixed: f64,
        range: Range,
        options: SolverOptions,
    },
    Compare {
        params: Params,
        c_range: Range,
        d_range: Range,
        sv_zero_rule: ZeroShapleyRule,
        options: SolverOptions,
    },
    Simulate {
        mechanism: MechanismKind,
        effort: EffortProfile,
        contribution: ContributionProfile,
        config: SimConfig,
    },
    Verify(VerifyJob),
}

/// Everything a job produced.
#[derive(Debug, Default)]
pub struct Output {
    /// Machine-readable document for standard output.
    pub document: Option<String>,
    /// Human-readable lines.
    pub summary: Vec<String>,
    /// Data files by name, written under the output directory.
    pub files: Vec<(String, Vec<u8>)>,
    /// Set when the job ran to completion but found a problem.
    pub failure: Option<CliError>,
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Solve { .. } => "solve",
            Job::Sweep { .. } => "sweep",
            Job::Series { .. } => "series",
            Job::Compare { .. } => "compare",
            Job::Simulate { .. } => "simulate",
            Job::Verify(_) => "verify",
        }
    }

    pub fn params(&self) -> Params {
        match self {
            Job::Solve { params, .. }
            | Job::Sweep { params, .. }
            | Job::Series { params, .. }
            | Job::Compare { params, .. } => *params,
            Job::Simulate { config, .. } => config.params,
            Job::Verify(v) => v.params,
        }
    }

    pub fn seeds(&self) -> Vec<u64> {
        match self {
            Job::Simulate { config, .. } => vec![config.seed],
            Job::Verify(v) => vec![v.seed],
            _ => Vec::new(),
        }
    }

    /// Whether the JSON document belongs on standard output rather than the
    /// summary.
    pub fn document_on_stdout(&self) -> bool {
        matches!(self, Job::Solve { .. } | Job::Simulate { .. })
    }

    pub fn run(&self) -> Result<Output, CliError> {
        match self {
            Job::Solve {
                mechanism,
                params,
                options,
            } => {
                let outcome = solve_spe_with(*mechanism, params, *options).map_err(CliError::NoPureEquilibrium)?;
                let doc = to_json(&outcome.record())?;
                Ok(Output {
                    summary: vec![outcome.to_string()],
                    files: vec![("equilibrium.json".into(), doc.clone().into_bytes())],
                    document: Some(doc),
                    failure: None,
                })
            }
            Job::Sweep {
                mechanism,
                params,
                c_range,
                d_range,
                options,
            } => {
                let grid = sweep(*mechanism, params, *c_range, *d_range, *options)?;
                let tag = mechanism.name().to_lowercase();
                let mut csv = Vec::new();
                grid.write_csv(&mut csv)?;
                let mut map = Vec::new();
                grid.write_region_map(&mut map)?;
                map.push(b'\n');
                let summary = grid
                    .histogram()
                    .into_iter()
                    .map(|(label, n)| format!("{label}\t{n}"))
                    .collect();
                Ok(Output {
                    summary,
                    files: vec![(format!("sweep_{tag}.csv"), csv), (format!("region_map_{tag}.json"), map)],
                    ..Output::default()
                })
            }
            Job::Series {
                mechanism,
                params,
                axis,
                fixed,
                range,
                options,
            } => {
                let points = series(*mechanism, params, *axis, *fixed, *range, *options)?;
                let mut w = csv_writer();
                for p in &points {
                    w.serialize(p).map_err(|e| CliError::Io(e.into()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(anyhow::anyhow!("{e}")))?;
                let axis_name = match axis {
                    SeriesAxis::C => "c",
                    SeriesAxis::D => "d",
                };
                let name = format!("series_{}_{axis_name}.csv", mechanism.name().to_lowercase());
                Ok(Output {
                    summary: vec![format!("{} points written to {name}", points.len())],
                    files: vec![(name, bytes)],
                    ..Output::default()
                })
            }
            Job::Compare {
                params,
                c_range,
                d_range,
                sv_zero_rule,
                options,
            } => {
                let run = |m| sweep(m, params, *c_range, *d_range, *options);
                let ea = run(MechanismKind::Ea)?;
                let oa = run(MechanismKind::Oa)?;
                let sv = run(MechanismKind::Sv(*sv_zero_rule))?;
                let report = compare(&ea, &oa, &sv)?;
                let summary = vec![
                    format!("cells compared: {}", report.cells.len()),
                    format!("accuracy SV < OA: {}", report.accuracy_sv_below_oa),
                    format!("accuracy OA < EA: {}", report.accuracy_oa_below_ea),
                    format!("welfare SV < OA: {}", report.welfare_sv_below_oa),
                    format!("welfare OA < EA: {}", report.welfare_oa_below_ea),
                    format!("unsolved cells: {}", report.unsolved),
                    format!("total violations: {}", report.violations()),
                ];
                Ok(Output {
                    summary,
                    files: vec![("dominance.json".into(), to_json(&report)?.into_bytes())],
                    ..Output::default()
                })
            }
            Job::Simulate {
                mechanism,
                effort,
                contribution,
                config,
            } => {
                let est = simulate(*effort, *contribution, *mechanism, config);
                let doc = to_json(&est)?;
                Ok(Output {
                    summary: vec![format!(
                        "{mechanism} e={effort} d={contribution}: accuracy {:.5} ± {:.5}, shares ({:.5}, {:.5})",
                        est.team_accuracy.mean, est.team_accuracy.se, est.share_high.mean, est.share_low.mean
                    )],
                    files: vec![("simulation.json".into(), doc.clone().into_bytes())],
                    document: Some(doc),
                    failure: None,
                })
            }
            Job::Verify(job) => {
                let report = verify::run(job)?;
                let mut summary: Vec<String> = report
                    .checks
                    .iter()
                    .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect();
                if let Some(changes) = &report.sv_convention_changes {
                    summary.push(format!(
                        "SV zero-Shapley convention changes {} region-map cell(s)",
                        changes.len()
                    ));
                    for ch in changes.iter().take(20) {
                        summary.push(format!(
                            "  c={:.4} D={:.4}: {} -> {}",
                            ch.c, ch.volume, ch.equal_split, ch.no_allocation
                        ));
                    }
                }
                let failures = report.failures();
                Ok(Output {
                    summary,
                    files: vec![("verify.json".into(), to_json(&report)?.into_bytes())],
                    document: None,
                    failure: (failures > 0).then_some(CliError::Verification(failures)),
                })
            }
        }
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    s.push('\n');
    Ok(s)
}
