//! Run configuration: flags, an optional JSON config file with the same keys,
//! and the environment, resolved in that order.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fail::Failure;

pub const THREADS_ENV: &str = "DRCYCLE_THREADS";

/// Keys accepted in a `--config` file. Unknown keys are rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub max_edges: Option<usize>,
    pub bound: Option<i64>,
    pub fit_degree: Option<usize>,
    pub fit_base: Option<i64>,
    pub holdouts: Option<Vec<i64>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io("config", path, e))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage("config", format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Truncation {
    pub max_edges: Option<usize>,
    pub bound: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sampling {
    pub degree: Option<usize>,
    pub base: Option<i64>,
    pub holdouts: Vec<i64>,
}

/// Everything that determines an output; serialized into every result.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: Value,
    pub truncation: Truncation,
    pub sampling: Sampling,
    pub output: Option<PathBuf>,
    pub threads: usize,
}

pub fn resolve_threads(flag: Option<usize>, file: &ConfigFile) -> Result<usize, Failure> {
    if let Some(n) = flag.or(file.threads) {
        return Ok(n.max(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(|n| n.max(1))
            .map_err(|_| Failure::usage(THREADS_ENV, format!("expected a positive integer, got {s:?}"))),
        Err(_) => Ok(1),
    }
}
