//! `opsim foguel`: summability functionals of a sequence and the power
//! differences of its block Hankel operator.

use anyhow::Result;
use serde_json::json;

use opsim_core::car::{foguel_hankel, power_diff_norm};
use opsim_core::sequences::{abel_swap_check, quantity_a, quantity_b, AlphaSpec};

use crate::config::{parse_alpha, RunConfig};
use crate::report::{Report, Verdict};

pub fn run(cfg: RunConfig) -> Result<Report> {
    let alpha = parse_alpha(&cfg.param_str("alpha", "geometric:0.5")?)?;
    let n_fibers = cfg.param_usize("fibers", 3)?;
    let modes = cfg.param_usize("modes", 2 * n_fibers.max(1) - 1)?;
    let k_max = cfg.param_usize("kmax", 1000)?;
    let n_sum = cfg.param_usize("nsum", 10_000)?;

    let mut report = Report::new(cfg);
    let qa = report.time_stage("quantity_a", || quantity_a(&alpha, k_max));
    let b2 = report.time_stage("quantity_b2", || quantity_b(&alpha, 2.0, n_sum))?;
    let b3 = report.time_stage("quantity_b3", || quantity_b(&alpha, 3.0, n_sum))?;

    let fh = report.time_stage("assemble", || foguel_hankel(&alpha, n_fibers, modes))?;
    let mut power_diffs = Vec::new();
    let mut sum_sq = 0.0f64;
    for n in 1..=(2 * n_fibers - 1) {
        let value = power_diff_norm(&fh, n)?;
        // The power-difference corner weights antidiagonal n-1, so the
        // matching tail starts there.
        let bound = (n as f64 + 1.0) * alpha.tail_sq(n - 1).upper().sqrt();
        sum_sq += value * value;
        report.verdicts.push(Verdict::from_margin(
            &format!("power_diff_{n}_below_tail_bound"),
            bound + 1e-10 - value,
            0.0,
            json!({"n": n, "fibers": n_fibers, "modes": modes}),
        ));
        power_diffs.push(json!({"n": n, "value": value, "bound": bound}));
    }
    // Square-summability against the rearranged weighted sum.
    let truncation = 2 * n_fibers;
    let abel = abel_swap_check(&alpha, truncation);
    report.verdicts.push(Verdict::from_margin(
        "power_diff_square_sum_below_rearranged_sum",
        abel.lhs + 1e-8 - sum_sq,
        0.0,
        json!({"truncation": truncation}),
    ));
    report.verdicts.push(Verdict::from_margin(
        "rearrangement_exact",
        1e-12 * abel.lhs.max(1.0) - abel.defect,
        0.0,
        json!({"truncation": truncation}),
    ));

    report.results = json!({
        "alpha_spec": AlphaSpec::from_seq(&alpha),
        "fibers": n_fibers,
        "modes": modes,
        "a": qa,
        "b2": b2,
        "b3": b3,
        "power_diffs": power_diffs,
        "bound_note": "bounds use (n+1) sqrt(tail(n-1)): the corner of the n-th power difference carries antidiagonal n-1",
    });
    Ok(report)
}
