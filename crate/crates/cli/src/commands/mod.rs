//! One runner per subcommand; each takes the resolved configuration and
//! produces a report.

pub mod alpha;
pub mod crho;
pub mod dominance;
pub mod foguel;
pub mod nearness;
pub mod pipeline;
pub mod renorm;
pub mod shift;

use anyhow::{bail, Result};

use crate::config::RunConfig;
use crate::report::Report;

pub fn dispatch(cfg: RunConfig) -> Result<Report> {
    match cfg.subcommand.as_str() {
        "nearness" => nearness::run(cfg),
        "renorm" => renorm::run_renorm(cfg),
        "rota" => renorm::run_rota(cfg),
        "dominance" => dominance::run(cfg),
        "foguel" => foguel::run(cfg),
        "alpha" => alpha::run(cfg),
        "crho" => crho::run(cfg),
        "shift" => shift::run(cfg),
        "pipeline" => pipeline::run(cfg),
        other => bail!("unknown subcommand `{other}`"),
    }
}
