use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use elicit_core::Params;

use crate::job::Job;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputFile {
    pub name: String,
    pub bytes: u64,
}

/// Record of one run. `job` alone is enough to reproduce every data file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub params: Params,
    pub seeds: Vec<u64>,
    pub generator: String,
    pub job: Job,
    pub outputs: Vec<OutputFile>,
    pub duration_secs: f64,
}

impl RunManifest {
    pub fn new(job: &Job, outputs: Vec<OutputFile>, duration_secs: f64) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: job.name().to_string(),
            params: job.params(),
            seeds: job.seeds(),
            generator: elicit_core::montecarlo::GENERATOR.to_string(),
            job: job.clone(),
            outputs,
            duration_secs,
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
