//! Run reports: config echo, results, verdicts with tolerances, timings.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    /// Distance to the threshold; negative means violated.
    pub margin: f64,
    pub tolerance: f64,
    /// Truncation indices and other parameters the verdict depends on.
    pub params: serde_json::Value,
}

impl Verdict {
    pub fn from_margin(name: &str, margin: f64, tolerance: f64, params: serde_json::Value) -> Self {
        Verdict {
            name: name.into(),
            status: if margin >= -tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            margin,
            tolerance,
            params,
        }
    }

    pub fn inconclusive(name: &str, params: serde_json::Value) -> Self {
        Verdict {
            name: name.into(),
            status: Status::Inconclusive,
            margin: f64::NAN,
            tolerance: f64::NAN,
            params,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub results: serde_json::Value,
    pub verdicts: Vec<Verdict>,
    /// Wall-clock stage timings; excluded from reproducibility comparisons.
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Report {
            config,
            results: serde_json::Value::Null,
            verdicts: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn time_stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms
            .insert(name.into(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fail)
    }

    /// Exit code under the contract: 0 when every verdict passes or is
    /// inconclusive, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.any_fail() {
            2
        } else {
            0
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Atomic write: temp file in the target directory, then rename.
    pub fn write(&self, path: &str) -> Result<()> {
        let target = Path::new(path);
        let dir = target.parent().filter(|p| !p.as_os_str().is_empty());
        let tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))
            .context("cannot create temporary report file")?;
        std::fs::write(tmp.path(), self.to_json()?)
            .with_context(|| format!("cannot write report `{path}`"))?;
        tmp.persist(target)
            .with_context(|| format!("cannot move report into place at `{path}`"))?;
        Ok(())
    }

    pub fn print_summary(&self) {
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            println!(
                "verdict {:<40} {:<12} margin {:+.3e} (tolerance {:.1e})",
                v.name, tag, v.margin, v.tolerance
            );
        }
    }
}
