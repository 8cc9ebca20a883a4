//! `opsim nearness`: weighted quadratic nearness of two operators.

use anyhow::Result;
use serde_json::json;

use opsim_core::nearness::quadratic_nearness;

use crate::config::{load_matrix, parse_beta, RunConfig};
use crate::report::{Report, Verdict};

pub fn run(cfg: RunConfig) -> Result<Report> {
    let t1 = load_matrix(cfg.input("t1")?)?;
    let t2 = load_matrix(cfg.input("t2")?)?;
    let beta = parse_beta(&cfg.param_str("beta", "const:1")?)?;
    let n_max = cfg.param_usize("nmax", 32)?;

    let mut report = Report::new(cfg);
    let near = report.time_stage("nearness", || quadratic_nearness(&t1, &t2, &beta, n_max))?;

    let min_increment = near
        .s_partial
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let params = json!({"n_max": n_max});
    report.verdicts.push(Verdict::from_margin(
        "partial_values_nondecreasing",
        min_increment.min(0.0),
        1e-12,
        params.clone(),
    ));
    report.verdicts.push(Verdict::from_margin(
        "s_below_term_norm_sum",
        near.u + 1e-10 - near.s,
        0.0,
        params,
    ));
    report.results = serde_json::to_value(&near)?;
    Ok(report)
}
