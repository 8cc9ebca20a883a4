//! `opsim alpha`: summability functionals of a sequence rule.

use anyhow::Result;
use serde_json::json;

use opsim_core::sequences::{abel_swap_check, quantity_a, quantity_b, AlphaSpec};

use crate::config::{parse_alpha, RunConfig};
use crate::report::{Report, Verdict};

pub fn run(cfg: RunConfig) -> Result<Report> {
    let alpha = parse_alpha(&cfg.param_str("alpha", "example32")?)?;
    let k_max = cfg.param_usize("kmax", 10_000)?;
    let n_sum = cfg.param_usize("nsum", 100_000)?;
    let power = cfg.param_f64("power", 2.0)?;
    let abel_len = cfg.param_usize("abel_len", 50)?;

    let mut report = Report::new(cfg);
    let qa = report.time_stage("quantity_a", || quantity_a(&alpha, k_max));
    let qb = report.time_stage("quantity_b", || quantity_b(&alpha, power, n_sum))?;
    let b3 = report.time_stage("quantity_b3", || quantity_b(&alpha, 3.0, n_sum))?;
    let abel = report.time_stage("abel", || abel_swap_check(&alpha, abel_len));

    report.verdicts.push(Verdict::from_margin(
        "rearrangement_exact",
        1e-12 * abel.lhs.max(1.0) - abel.defect,
        0.0,
        json!({"truncation": abel_len}),
    ));
    report.results = json!({
        "alpha_spec": AlphaSpec::from_seq(&alpha),
        "a": qa,
        "b": {"power": power, "result": qb},
        "b3": b3,
        "abel": abel,
    });
    Ok(report)
}
