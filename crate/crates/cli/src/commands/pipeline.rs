//! `opsim pipeline`: chain the application routes end to end, recording the
//! verdicts of every stage separately.
//!
//! `kind = "rota"`: seeded instance -> nearness to zero -> renorming ->
//! contraction and polynomial-bound checks.
//!
//! `kind = "foguel"`: sequence functionals -> block Hankel power
//! differences -> factored renorming of the block operator against its
//! zero-symbol part -> certified similarity bound.

use anyhow::{bail, Result};
use serde_json::json;

use opsim_core::car::{foguel_hankel, power_diff_norm};
use opsim_core::dominance::{paulsen_ratio, PolyFamily};
use opsim_core::instances;
use opsim_core::nearness::quadratic_nearness;
use opsim_core::renorm::{build_gram, equivalence_check, GammaChoice, RenormConfig};
use opsim_core::sequences::{abel_swap_check, quantity_a, quantity_b, AlphaSpec, BetaWeight};
use opsim_core::Operator;

use crate::config::{parse_alpha, RunConfig};
use crate::report::{Report, Verdict};

pub fn run(cfg: RunConfig) -> Result<Report> {
    let kind = cfg.param_str("kind", "rota")?;
    match kind.as_str() {
        "rota" => run_rota_chain(cfg),
        "foguel" => run_foguel_chain(cfg),
        other => bail!("params.kind: expected rota | foguel, got `{other}`"),
    }
}

fn run_rota_chain(cfg: RunConfig) -> Result<Report> {
    let n = cfg.param_usize("n", 8)?;
    let cap = cfg.param_f64("cap", 0.9)?;
    let depth = cfg.param_usize("d", 48)?;
    let seed = cfg.seed;

    let mut report = Report::new(cfg);
    let t = instances::gen_instance("ginibre", n, cap, seed)?;

    // Stage 1: spectral radius below one puts T quadratically near zero.
    let zero = Operator::zeros(n, n);
    let near = report.time_stage("stage1_nearness", || {
        quadratic_nearness(&t, &zero, &BetaWeight::one(), depth)
    })?;
    report.verdicts.push(Verdict::from_margin(
        "stage1_tail_controlled",
        match near.tail_bound {
            Some(tb) => 1e-6 - tb,
            None => -1.0,
        },
        0.0,
        json!({"n_max": depth, "cap": cap}),
    ));

    // Stage 2: renorm and check the contraction.
    let cert = report.time_stage("stage2_renorm", || {
        build_gram(&RenormConfig::rota(t.clone(), BetaWeight::one(), depth))
    })?;
    let eq = equivalence_check(&cert)?;
    report.verdicts.push(Verdict::from_margin(
        "stage2_equivalence_lower",
        eq.lower_margin,
        1e-8,
        json!({"depth": depth}),
    ));
    report.verdicts.push(Verdict::from_margin(
        "stage2_t1_contraction",
        1.0 + 1e-8 - cert.t1.op_norm(),
        0.0,
        json!({"depth": depth}),
    ));

    // Stage 3: sampled polynomial-bound ratio of the renormed operator.
    let fam = PolyFamily::random_coeff(4, 8, seed);
    let ratio = report.time_stage("stage3_paulsen", || paulsen_ratio(&cert.t1, &fam, 1))?;
    report.verdicts.push(Verdict::from_margin(
        "stage3_polynomial_bound",
        1.0 + 1e-6 - ratio,
        0.0,
        json!({"family_count": 8, "degree": 4}),
    ));

    report.results = json!({
        "n": n, "cap": cap, "depth": depth,
        "nearness_s": near.s,
        "nearness_tail": near.tail_bound,
        "t1_norm": cert.t1.op_norm(),
        "sim_const": cert.sim_const,
        "sim_bound": cert.sim_bound,
        "paulsen_ratio_lower_bound": ratio,
    });
    Ok(report)
}

fn run_foguel_chain(cfg: RunConfig) -> Result<Report> {
    let alpha = parse_alpha(&cfg.param_str("alpha", "geometric:0.5")?)?;
    let n_fibers = cfg.param_usize("fibers", 2)?;
    let modes = cfg.param_usize("modes", 2 * n_fibers.max(1) - 1)?;
    let depth = cfg.param_usize("d", 12)?;

    let mut report = Report::new(cfg);

    // Stage 1: summability functionals.
    let qa = quantity_a(&alpha, 1000);
    let b2 = quantity_b(&alpha, 2.0, 10_000)?;
    let b3 = quantity_b(&alpha, 3.0, 10_000)?;
    let abel = abel_swap_check(&alpha, 2 * n_fibers);
    report.verdicts.push(Verdict::from_margin(
        "stage1_rearrangement_exact",
        1e-12 * abel.lhs.max(1.0) - abel.defect,
        0.0,
        json!({"truncation": 2 * n_fibers}),
    ));

    // Stage 2: power differences square-sum against the rearranged sum.
    let fh = report.time_stage("stage2_assemble", || {
        foguel_hankel(&alpha, n_fibers, modes)
    })?;
    let mut sum_sq = 0.0;
    let mut diffs = Vec::new();
    for p in 1..=(2 * n_fibers - 1) {
        let v = power_diff_norm(&fh, p)?;
        sum_sq += v * v;
        diffs.push(v);
    }
    report.verdicts.push(Verdict::from_margin(
        "stage2_square_sum_bound",
        abel.lhs + 1e-8 - sum_sq,
        0.0,
        json!({"fibers": n_fibers, "modes": modes}),
    ));

    // Stage 3: renorm the block operator against its zero-symbol part.
    let r = fh
        .r
        .clone()
        .ok_or_else(|| anyhow::anyhow!("fibers/modes too large for the dense chain stage"))?;
    let r0 = fh.r_zero.clone().unwrap();
    let dim = r.rows();
    let id = Operator::identity(dim);
    let rcfg = RenormConfig::factored(
        r,
        r0,
        id.clone(),
        id,
        BetaWeight::one(),
        GammaChoice::Auto,
        depth,
    );
    let cert = report.time_stage("stage3_renorm", || build_gram(&rcfg))?;
    let eq = equivalence_check(&cert)?;
    report.verdicts.push(Verdict::from_margin(
        "stage3_equivalence_lower",
        eq.lower_margin,
        1e-8,
        json!({"depth": depth}),
    ));
    report.verdicts.push(Verdict::from_margin(
        "stage3_similarity_bound",
        cert.sim_bound * (1.0 + 1e-6) - cert.sim_const,
        0.0,
        json!({"depth": depth}),
    ));

    report.results = json!({
        "alpha_spec": AlphaSpec::from_seq(&alpha),
        "a": qa,
        "b2": b2,
        "b3": b3,
        "power_diffs": diffs,
        "square_sum": sum_sq,
        "rearranged_sum": abel.lhs,
        "sim_const": cert.sim_const,
        "sim_bound": cert.sim_bound,
        "t1_norm": cert.t1.op_norm(),
    });
    Ok(report)
}
