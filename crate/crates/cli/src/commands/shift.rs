//! `opsim shift`: emit a truncated weighted shift as matrix JSON with a
//! weights sidecar.

use anyhow::{Context, Result};
use serde_json::json;

use opsim_core::shifts::{truncated_weighted_shift, two_isometry_defect};

use crate::config::{parse_beta, RunConfig};
use crate::report::Report;

pub fn run(cfg: RunConfig) -> Result<Report> {
    let beta = parse_beta(&cfg.param_str("beta", "const:1")?)?;
    let n_fibers = cfg.param_usize("fibers", 8)?;
    let multiplicity = cfg.param_usize("multiplicity", 1)?;
    let matrix_out = cfg.param_str("matrix_out", "")?;

    let mut report = Report::new(cfg);
    let shift = report.time_stage("assemble", || {
        truncated_weighted_shift(&beta, n_fibers, multiplicity)
    })?;

    if !matrix_out.is_empty() {
        let mut body = serde_json::to_string_pretty(&shift.matrix)?;
        body.push('\n');
        std::fs::write(&matrix_out, body)
            .with_context(|| format!("cannot write matrix `{matrix_out}`"))?;
        let sidecar_path = format!("{matrix_out}.weights.json");
        let mut sidecar = serde_json::to_string_pretty(&json!({
            "weights": shift.weights,
            "multiplicity": shift.multiplicity,
        }))?;
        sidecar.push('\n');
        std::fs::write(&sidecar_path, sidecar)
            .with_context(|| format!("cannot write sidecar `{sidecar_path}`"))?;
    }

    let defect = if n_fibers >= 4 {
        Some(two_isometry_defect(&shift)?)
    } else {
        None
    };
    report.results = json!({
        "fibers": n_fibers,
        "multiplicity": multiplicity,
        "weights": shift.weights,
        "norm": shift.norm(),
        "interior_two_isometry_defect": defect,
        "matrix_out": if matrix_out.is_empty() { None } else { Some(matrix_out) },
    });
    Ok(report)
}
