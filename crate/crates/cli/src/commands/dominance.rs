//! `opsim dominance`: sampled lower bounds on dominance constants, with a
//! CSV table of per-polynomial ratios.

use anyhow::{bail, Context, Result};
use serde_json::json;

use opsim_core::dominance::{dominance_ratio, PolyFamily};

use crate::config::{load_matrix, RunConfig};
use crate::report::Report;

fn parse_family(spec: &str, degree: usize, count: usize, seed: u64) -> Result<PolyFamily> {
    if spec == "random" {
        Ok(PolyFamily::random_coeff(degree, count, seed))
    } else if spec == "chebyshev" {
        Ok(PolyFamily {
            kind: opsim_core::dominance::FamilyKind::ChebyshevLike,
            degree_max: degree,
            vanishing_order: 0,
            count,
            seed,
        })
    } else if let Some(d) = spec.strip_prefix("zd:") {
        let order = d.parse::<usize>().with_context(|| format!("family `{spec}`"))?;
        Ok(PolyFamily::zd_vanishing(order, degree.max(order), count, seed))
    } else {
        bail!("params.family: expected random | chebyshev | zd:D, got `{spec}`");
    }
}

pub fn run(cfg: RunConfig) -> Result<Report> {
    let t1 = load_matrix(cfg.input("t1")?)?;
    let t2 = load_matrix(cfg.input("t2")?)?;
    let degree = cfg.param_usize("degree", 3)?;
    let level = cfg.param_usize("level", 1)?;
    let count = cfg.param_usize("count", 32)?;
    let family_spec = cfg.param_str("family", "random")?;
    let csv_path = cfg.param_str("csv", "")?;
    let family = parse_family(&family_spec, degree, count, cfg.seed)?;

    let mut report = Report::new(cfg);
    let (ratio, _witness) =
        report.time_stage("dominance_ratio", || dominance_ratio(&t1, &t2, &family, level))?;

    if !csv_path.is_empty() {
        let mut w = csv::Writer::from_path(&csv_path)
            .with_context(|| format!("cannot open csv `{csv_path}`"))?;
        w.write_record(["index", "ratio", "skipped"])?;
        for (i, r) in ratio.ratios.iter().enumerate() {
            if r.is_nan() {
                w.write_record([i.to_string(), String::new(), "1".into()])?;
            } else {
                w.write_record([i.to_string(), format!("{r}"), "0".into()])?;
            }
        }
        w.flush()?;
    }

    report.results = json!({
        "max_ratio_lower_bound": ratio.max_ratio,
        "witness_index": ratio.witness_index,
        "skipped": ratio.skipped,
        "count": count,
        "level": level,
        "family": family_spec,
        "note": "sampled values are lower bounds on the dominance constant",
    });
    Ok(report)
}
