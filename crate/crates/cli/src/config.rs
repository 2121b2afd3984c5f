//! Parameter resolution: built-in defaults, then a flat key-value config
//! file, then command-line flags.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use serde::Deserialize;

use elicit_core::analysis::Range;
use elicit_core::{validate, ContributionProfile, EffortProfile, Params};

use crate::error::CliError;

/// Environment variable naming a config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "ELICIT_CONFIG";

/// Keys accepted in a config file, e.g. `a = 0.8`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    a: Option<f64>,
    c: Option<f64>,
    #[serde(alias = "D")]
    d: Option<f64>,
    vh: Option<f64>,
    vl: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Flat key-value config file (keys: a, c, d, vh, vl)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Solution accuracy with effort, in (0.5, 1]
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Valuation of the high-valuation member
    #[arg(long, global = true)]
    pub vh: Option<f64>,
    /// Valuation of the low-valuation member
    #[arg(long, global = true)]
    pub vl: Option<f64>,
}

fn load_file(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(CliError::Io)?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

impl ModelArgs {
    /// Merges defaults, the config file and flags. `c` and `d` come from the
    /// command's own flags when it has them.
    pub fn resolve(&self, c: Option<f64>, d: Option<f64>) -> Result<Params, CliError> {
        let path = self
            .config
            .clone()
            .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let file = match path {
            Some(p) => load_file(&p)?,
            None => ConfigFile::default(),
        };
        let mut params = Params::default();
        params.effort_accuracy = self.a.or(file.a).unwrap_or(params.effort_accuracy);
        params.effort_cost = c.or(file.c).unwrap_or(params.effort_cost);
        params.volume = d.or(file.d).unwrap_or(params.volume);
        params.v_high = self.vh.or(file.vh).unwrap_or(params.v_high);
        params.v_low = self.vl.or(file.vl).unwrap_or(params.v_low);
        check(&params)?;
        Ok(params)
    }
}

/// Rejects out-of-range parameters; a narrow valuation ratio only warns.
pub fn check(params: &Params) -> Result<(), CliError> {
    let report = validate(params).map_err(|e| CliError::Usage(e.to_string()))?;
    if !report.is_valid() {
        let msg: Vec<_> = report.failures().map(|c| c.message.clone()).collect();
        return Err(CliError::Usage(msg.join("; ")));
    }
    if !report.diverse_valuations {
        eprintln!(
            "warning: V_H/V_L = {:.4} does not exceed {:.4}; results lie outside the diverse-valuation regime",
            params.v_high / params.v_low,
            params.diverse_ratio_threshold()
        );
    }
    Ok(())
}

/// Parses `start:end:count` with inclusive endpoints.
pub fn parse_range(text: &str) -> Result<Range, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(format!("expected start:end:count, got {text:?}"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let count = count
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{count:?}: {e}"))?;
    Ok(Range::new(num(start)?, num(end)?, count))
}

fn parse_pair(text: &str, on: &[&str]) -> Result<(bool, bool), String> {
    let parse_one = |s: &str| match s.trim() {
        "0" => Ok(false),
        x if on.contains(&x) => Ok(true),
        x => Err(format!("unexpected entry {x:?}")),
    };
    match text.split(',').collect::<Vec<_>>().as_slice() {
        [h, l] => Ok((parse_one(h)?, parse_one(l)?)),
        _ => Err(format!("expected two comma-separated entries, got {text:?}")),
    }
}

/// Effort profile written as `H,L` with entries 0 or 1.
pub fn parse_effort(text: &str) -> Result<EffortProfile, String> {
    parse_pair(text, &["1"]).map(|(h, l)| EffortProfile::new(h, l))
}

/// Contribution profile written as `H,L` with entries 0 and D (or 1).
pub fn parse_contribution(text: &str) -> Result<ContributionProfile, String> {
    parse_pair(text, &["D", "d", "1"]).map(|(h, l)| ContributionProfile::new(h, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.01:0.5:100").unwrap(), Range::new(0.01, 0.5, 100));
        assert!(parse_range("0.01:0.5").is_err());
        assert!(parse_range("a:0.5:3").is_err());
    }

    #[test]
    fn profiles() {
        assert_eq!(parse_effort("1,0").unwrap(), EffortProfile::new(true, false));
        assert_eq!(parse_contribution("0,D").unwrap(), ContributionProfile::new(false, true));
        assert!(parse_effort("2,0").is_err());
        assert!(parse_effort("1").is_err());
    }

    #[test]
    fn config_file_and_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.toml");
        std::fs::write(&path, "a = 0.9\nvh = 3.0\nD = 0.2\n").unwrap();
        let args = ModelArgs {
            config: Some(path),
            a: None,
            vh: Some(2.5),
            vl: None,
        };
        let p = args.resolve(Some(0.1), None).unwrap();
        assert_eq!(p.effort_accuracy, 0.9);
        assert_eq!(p.v_high, 2.5);
        assert_eq!(p.volume, 0.2);
        assert_eq!(p.effort_cost, 0.1);
        assert_eq!(p.v_low, 1.0);
    }

    #[test]
    fn unknown_key_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "alpha = 0.9\n").unwrap();
        let args = ModelArgs {
            config: Some(path),
            a: None,
            vh: None,
            vl: None,
        };
        assert!(matches!(args.resolve(None, None), Err(CliError::Usage(_))));
    }
}
