//! `opsim crho`: disk-grid positivity certificate for dilation-class
//! membership.

use anyhow::Result;
use serde_json::json;

use opsim_core::dilation::{crho_positivity, PositivityVerdict};

use crate::config::{load_matrix, parse_rho, RunConfig};
use crate::report::{Report, Verdict};

pub fn run(cfg: RunConfig) -> Result<Report> {
    let t = load_matrix(cfg.input("t")?)?;
    let rho = parse_rho(&cfg.param_str("rho", "const:1")?)?;
    let r_max = cfg.param_f64("rmax", 0.9)?;
    let grid = cfg.param_usize("grid", 64)?;
    let n_trunc = cfg.param_usize("ntrunc", 32)?;

    let mut report = Report::new(cfg);
    let pos = report.time_stage("positivity_scan", || {
        crho_positivity(&t, &rho, r_max, grid, n_trunc)
    })?;

    let params = json!({
        "r_max": pos.r_max,
        "grid_angles": pos.grid_angles,
        "grid_radii": pos.grid_radii,
        "n_trunc": pos.n_trunc,
        "tail_bound": pos.tail_bound,
    });
    report.verdicts.push(match pos.verdict {
        PositivityVerdict::Inconclusive => Verdict::inconclusive("positivity", params),
        _ => Verdict::from_margin(
            "positivity",
            pos.min_eig + pos.tail_bound,
            1e-10,
            params,
        ),
    });
    report.results = serde_json::to_value(&pos)?;
    Ok(report)
}
