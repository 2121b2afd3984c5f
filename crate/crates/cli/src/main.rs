mod config;
mod error;
mod job;
mod manifest;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use elicit_core::analysis::{Range, SeriesAxis};
use elicit_core::{
    ContributionProfile, EffortProfile, MechanismKind, ReportingStrategy, SelectionRule, SimConfig, SolverOptions,
    ZeroShapleyRule, DEFAULT_TOLERANCE,
};

use config::{parse_contribution, parse_effort, parse_range, ModelArgs};
use error::CliError;
use job::Job;
use manifest::{OutputFile, RunManifest, MANIFEST_FILE};
use verify::VerifyJob;

const DEFAULT_OUT: &str = "elicit-out";

/// Solve and analyse the two-member contribution and effort game under
/// equal allocation, output agreement and Shapley value rewards.
#[derive(Debug, Parser)]
#[command(name = "elicit", version)]
struct Cli {
    /// Worker threads (defaults to all cores; results do not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mech {
    Ea,
    Oa,
    Sv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Selection {
    Canonical,
    MaxAccuracy,
    Lexicographic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ZeroRule {
    Equal,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reporting {
    Truthful,
    Flip,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Axis {
    C,
    D,
}

#[derive(Debug, Clone, Args)]
struct SolverArgs {
    /// Equilibrium selection rule
    #[arg(long, value_enum, default_value = "canonical")]
    selection: Selection,
    /// Tolerance for weak best responses
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Pool split when both Shapley values are zero
    #[arg(long, value_enum, default_value = "equal")]
    sv_zero_rule: ZeroRule,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions, CliError> {
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return Err(CliError::Usage(format!(
                "tolerance must be finite and non-negative, got {}",
                self.tolerance
            )));
        }
        let selection = match self.selection {
            Selection::Canonical => SelectionRule::Canonical,
            Selection::MaxAccuracy => SelectionRule::MaxAccuracy,
            Selection::Lexicographic => SelectionRule::Lexicographic,
        };
        Ok(SolverOptions {
            selection,
            tolerance: self.tolerance,
        })
    }

    fn zero_rule(&self) -> ZeroShapleyRule {
        match self.sv_zero_rule {
            ZeroRule::Equal => ZeroShapleyRule::EqualSplit,
            ZeroRule::None => ZeroShapleyRule::NoAllocation,
        }
    }

    fn mechanism(&self, m: Mech) -> MechanismKind {
        match m {
            Mech::Ea => MechanismKind::Ea,
            Mech::Oa => MechanismKind::Oa,
            Mech::Sv => MechanismKind::Sv(self.zero_rule()),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one parameter point and print the equilibrium as JSON
    Solve {
        #[arg(long, value_enum)]
        mech: Mech,
        /// Effort cost
        #[arg(long)]
        c: Option<f64>,
        /// Contribution volume
        #[arg(long)]
        d: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also write equilibrium.json and a manifest here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a (c, D) grid and write the cell table and region map
    Sweep {
        #[arg(long, value_enum)]
        mech: Mech,
        /// Effort cost range, start:end:count
        #[arg(long, value_parser = parse_range, default_value = "0.005:0.5:100")]
        c: Range,
        /// Volume range, start:end:count
        #[arg(long, value_parser = parse_range, default_value = "0.008:0.8:100")]
        d: Range,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = DEFAULT_OUT)]
        out: PathBuf,
    },
    /// Accuracy and welfare along one axis
    Series {
        #[arg(long, value_enum)]
        mech: Mech,
        /// Axis to vary
        #[arg(long, value_enum)]
        axis: Axis,
        /// Effort cost, held fixed when varying D
        #[arg(long)]
        c: Option<f64>,
        /// Volume, held fixed when varying c
        #[arg(long)]
        d: Option<f64>,
        /// Values along the axis, start:end:count
        #[arg(long, value_parser = parse_range)]
        range: Range,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = DEFAULT_OUT)]
        out: PathBuf,
    },
    /// Cell-wise accuracy and welfare ordering of the three mechanisms
    Compare {
        #[arg(long, value_parser = parse_range, default_value = "0.005:0.5:100")]
        c: Range,
        #[arg(long, value_parser = parse_range, default_value = "0.008:0.8:100")]
        d: Range,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = DEFAULT_OUT)]
        out: PathBuf,
    },
    /// Monte Carlo estimate of accuracy, shares and payoffs for fixed profiles
    Simulate {
        #[arg(long, value_enum)]
        mech: Mech,
        /// Effort profile H,L
        #[arg(long, value_parser = parse_effort, default_value = "1,1")]
        e: EffortProfile,
        /// Contribution profile H,L with entries 0 or D
        #[arg(long, value_parser = parse_contribution, default_value = "0,0")]
        contrib: ContributionProfile,
        /// Effort cost
        #[arg(long)]
        c: Option<f64>,
        /// Contribution volume
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "truthful")]
        report_high: Reporting,
        #[arg(long, value_enum, default_value = "truthful")]
        report_low: Reporting,
        #[arg(long, value_enum, default_value = "equal")]
        sv_zero_rule: ZeroRule,
        /// Also write simulation.json and a manifest here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in checks and print PASS/FAIL per check
    Verify {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid points per axis
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = DEFAULT_OUT)]
        out: PathBuf,
    },
    /// Re-run the job recorded in a manifest
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = DEFAULT_OUT)]
        out: PathBuf,
    },
}

fn reporting(r: Reporting) -> ReportingStrategy {
    match r {
        Reporting::Truthful => ReportingStrategy::Truthful,
        Reporting::Flip => ReportingStrategy::AlwaysFlip,
    }
}

/// Turns parsed arguments into a job and the directory its files go to.
fn build(model: &ModelArgs, command: Command) -> Result<(Job, Option<PathBuf>), CliError> {
    Ok(match command {
        Command::Solve { mech, c, d, solver, out } => (
            Job::Solve {
                mechanism: solver.mechanism(mech),
                params: model.resolve(c, d)?,
                options: solver.options()?,
            },
            out,
        ),
        Command::Sweep { mech, c, d, solver, out } => (
            Job::Sweep {
                mechanism: solver.mechanism(mech),
                params: model.resolve(None, None)?,
                c_range: c,
                d_range: d,
                options: solver.options()?,
            },
            Some(out),
        ),
        Command::Series {
            mech,
            axis,
            c,
            d,
            range,
            solver,
            out,
        } => {
            let params = model.resolve(c, d)?;
            let (axis, fixed) = match axis {
                Axis::C => (SeriesAxis::C, params.volume),
                Axis::D => (SeriesAxis::D, params.effort_cost),
            };
            (
                Job::Series {
                    mechanism: solver.mechanism(mech),
                    params,
                    axis,
                    fixed,
                    range,
                    options: solver.options()?,
                },
                Some(out),
            )
        }
        Command::Compare { c, d, solver, out } => (
            Job::Compare {
                params: model.resolve(None, None)?,
                c_range: c,
                d_range: d,
                sv_zero_rule: solver.zero_rule(),
                options: solver.options()?,
            },
            Some(out),
        ),
        Command::Simulate {
            mech,
            e,
            contrib,
            c,
            d,
            samples,
            seed,
            report_high,
            report_low,
            sv_zero_rule,
            out,
        } => {
            if samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let mut config = SimConfig::new(samples, seed, model.resolve(c, d)?);
            config.reporting_high = reporting(report_high);
            config.reporting_low = reporting(report_low);
            let mechanism = match mech {
                Mech::Ea => MechanismKind::Ea,
                Mech::Oa => MechanismKind::Oa,
                Mech::Sv => MechanismKind::Sv(match sv_zero_rule {
                    ZeroRule::Equal => ZeroShapleyRule::EqualSplit,
                    ZeroRule::None => ZeroShapleyRule::NoAllocation,
                }),
            };
            (
                Job::Simulate {
                    mechanism,
                    effort: e,
                    contribution: contrib,
                    config,
                },
                out,
            )
        }
        Command::Verify {
            samples,
            seed,
            resolution,
            solver,
            out,
        } => {
            if samples < 2 {
                return Err(CliError::Usage("--samples must be at least 2".into()));
            }
            if resolution < 2 {
                return Err(CliError::Usage("--resolution must be at least 2".into()));
            }
            (
                Job::Verify(VerifyJob {
                    params: model.resolve(None, None)?,
                    samples,
                    seed,
                    resolution,
                    sv_zero_rule: solver.zero_rule(),
                    options: solver.options()?,
                }),
                Some(out),
            )
        }
        Command::Replay { manifest, out } => {
            let m = RunManifest::load(&manifest).map_err(CliError::Io)?;
            if m.tool_version != env!("CARGO_PKG_VERSION") {
                eprintln!(
                    "warning: manifest written by version {}, replaying with {}",
                    m.tool_version,
                    env!("CARGO_PKG_VERSION")
                );
            }
            config::check(&m.job.params())?;
            (m.job, Some(out))
        }
    })
}

fn write_outputs(dir: &Path, job: &Job, files: &[(String, Vec<u8>)], started: Instant) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut outputs = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        outputs.push(OutputFile {
            name: name.clone(),
            bytes: bytes.len() as u64,
        });
    }
    let manifest = RunManifest::new(job, outputs, started.elapsed().as_secs_f64());
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.into()))?;
    }
    let started = Instant::now();
    let (job, out) = build(&cli.model, cli.command)?;
    let output = job.run()?;

    if job.document_on_stdout() {
        if let Some(doc) = &output.document {
            print!("{doc}");
        }
        for line in &output.summary {
            eprintln!("{line}");
        }
    } else {
        for line in &output.summary {
            println!("{line}");
        }
    }
    if let Some(dir) = out {
        write_outputs(&dir, &job, &output.files, started).map_err(CliError::Io)?;
        eprintln!("wrote {} file(s) and {MANIFEST_FILE} to {}", output.files.len(), dir.display());
    }
    match output.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
