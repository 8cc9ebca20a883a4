//! opsim: a command-line laboratory for operator similarity experiments on
//! dense complex matrices.
//!
//! Exit codes: 0 when every verdict passes or is inconclusive, 1 on input
//! errors, 2 when any verdict fails.

mod commands;
mod config;
mod report;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "opsim", version, about = "operator similarity laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<String>,
    /// Report output path (JSON, written atomically).
    #[arg(long)]
    out: Option<String>,
    /// Root seed for every sampled quantity.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weighted quadratic nearness of two operators.
    Nearness {
        #[command(flatten)]
        common: Common,
        /// Matrix JSON path for the first operator.
        #[arg(long)]
        t1: Option<String>,
        /// Matrix JSON path for the second operator.
        #[arg(long)]
        t2: Option<String>,
        /// Weight rule: sqrt | const:V | table:a,b,c | spec file.
        #[arg(long)]
        beta: Option<String>,
        /// Truncation index of the partial sums.
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Factored renorming with certified equivalence constants.
    Renorm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        v1: Option<String>,
        #[arg(long)]
        v2: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// `auto` or a positive number.
        #[arg(long)]
        gamma: Option<String>,
        /// Decomposition truncation degree.
        #[arg(long)]
        d: Option<usize>,
        /// Exponent (2 for the exact quadratic path).
        #[arg(long)]
        p: Option<f64>,
    },
    /// Spectral-radius renorming toward a contraction.
    Rota {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Sampled polynomial-dominance ratios with a CSV table.
    Dominance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t1: Option<String>,
        #[arg(long)]
        t2: Option<String>,
        /// random | chebyshev | zd:D
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        /// CSV output path (one row per sampled polynomial).
        #[arg(long)]
        csv: Option<String>,
    },
    /// Sequence functionals and block-Hankel power differences.
    Foguel {
        #[command(flatten)]
        common: Common,
        /// example32 | pisier[:c] | geometric:c | explicit:a,b,c | spec file.
        #[arg(long)]
        alpha: Option<String>,
        /// Hankel truncation (number of block fibers).
        #[arg(long)]
        fibers: Option<usize>,
        /// Number of generator modes (fiber dimension 2^modes).
        #[arg(long)]
        modes: Option<usize>,
    },
    /// Summability functionals of a sequence rule.
    Alpha {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        power: Option<f64>,
    },
    /// Disk-grid positivity certificate for dilation classes.
    Crho {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: Option<String>,
        /// const:V | table:FILE
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        rmax: Option<f64>,
        /// Number of angular grid points.
        #[arg(long)]
        grid: Option<usize>,
        /// Series truncation.
        #[arg(long)]
        ntrunc: Option<usize>,
    },
    /// Emit a truncated weighted shift with its weights sidecar.
    Shift {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        fibers: Option<usize>,
        #[arg(long)]
        multiplicity: Option<usize>,
        /// Matrix JSON output path (sidecar written alongside).
        #[arg(long)]
        matrix_out: Option<String>,
    },
    /// Chain an application route end to end (rota | foguel).
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        cap: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        fibers: Option<usize>,
        #[arg(long)]
        modes: Option<usize>,
    },
}

fn resolve(name: &str, common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let cfg = RunConfig::load(path)?;
            if cfg.subcommand != name {
                anyhow::bail!(
                    "config `{path}` is for subcommand `{}`, invoked as `{name}`",
                    cfg.subcommand
                );
            }
            cfg
        }
        None => RunConfig::new(name),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.out = Some(out.clone());
    }
    Ok(cfg)
}

fn build_config(cmd: &Cmd) -> anyhow::Result<RunConfig> {
    Ok(match cmd {
        Cmd::Nearness {
            common,
            t1,
            t2,
            beta,
            nmax,
        } => {
            let mut cfg = resolve("nearness", common)?;
            cfg.set_input("t1", t1.clone());
            cfg.set_input("t2", t2.clone());
            cfg.set_param_str("beta", beta.clone());
            cfg.set_param_usize("nmax", *nmax);
            cfg
        }
        Cmd::Renorm {
            common,
            t,
            c,
            v1,
            v2,
            beta,
            gamma,
            d,
            p,
        } => {
            let mut cfg = resolve("renorm", common)?;
            cfg.set_input("t", t.clone());
            cfg.set_input("c", c.clone());
            cfg.set_input("v1", v1.clone());
            cfg.set_input("v2", v2.clone());
            cfg.set_param_str("beta", beta.clone());
            cfg.set_param_str("gamma", gamma.clone());
            cfg.set_param_usize("d", *d);
            cfg.set_param_f64("p", *p);
            cfg
        }
        Cmd::Rota {
            common,
            t,
            beta,
            d,
            p,
        } => {
            let mut cfg = resolve("rota", common)?;
            cfg.set_input("t", t.clone());
            cfg.set_param_str("beta", beta.clone());
            cfg.set_param_usize("d", *d);
            cfg.set_param_f64("p", *p);
            cfg
        }
        Cmd::Dominance {
            common,
            t1,
            t2,
            family,
            degree,
            level,
            count,
            csv,
        } => {
            let mut cfg = resolve("dominance", common)?;
            cfg.set_input("t1", t1.clone());
            cfg.set_input("t2", t2.clone());
            cfg.set_param_str("family", family.clone());
            cfg.set_param_usize("degree", *degree);
            cfg.set_param_usize("level", *level);
            cfg.set_param_usize("count", *count);
            cfg.set_param_str("csv", csv.clone());
            cfg
        }
        Cmd::Foguel {
            common,
            alpha,
            fibers,
            modes,
        } => {
            let mut cfg = resolve("foguel", common)?;
            cfg.set_param_str("alpha", alpha.clone());
            cfg.set_param_usize("fibers", *fibers);
            cfg.set_param_usize("modes", *modes);
            cfg
        }
        Cmd::Alpha {
            common,
            alpha,
            kmax,
            power,
        } => {
            let mut cfg = resolve("alpha", common)?;
            cfg.set_param_str("alpha", alpha.clone());
            cfg.set_param_usize("kmax", *kmax);
            cfg.set_param_f64("power", *power);
            cfg
        }
        Cmd::Crho {
            common,
            t,
            rho,
            rmax,
            grid,
            ntrunc,
        } => {
            let mut cfg = resolve("crho", common)?;
            cfg.set_input("t", t.clone());
            cfg.set_param_str("rho", rho.clone());
            cfg.set_param_f64("rmax", *rmax);
            cfg.set_param_usize("grid", *grid);
            cfg.set_param_usize("ntrunc", *ntrunc);
            cfg
        }
        Cmd::Shift {
            common,
            beta,
            fibers,
            multiplicity,
            matrix_out,
        } => {
            let mut cfg = resolve("shift", common)?;
            cfg.set_param_str("beta", beta.clone());
            cfg.set_param_usize("fibers", *fibers);
            cfg.set_param_usize("multiplicity", *multiplicity);
            cfg.set_param_str("matrix_out", matrix_out.clone());
            cfg
        }
        Cmd::Pipeline {
            common,
            kind,
            alpha,
            n,
            cap,
            d,
            fibers,
            modes,
        } => {
            let mut cfg = resolve("pipeline", common)?;
            cfg.set_param_str("kind", kind.clone());
            cfg.set_param_str("alpha", alpha.clone());
            cfg.set_param_usize("n", *n);
            cfg.set_param_f64("cap", *cap);
            cfg.set_param_usize("d", *d);
            cfg.set_param_usize("fibers", *fibers);
            cfg.set_param_usize("modes", *modes);
            cfg
        }
    })
}

fn main() {
    let cli = Cli::parse();
    let cfg = match build_config(&cli.cmd) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    };
    let out = cfg.out.clone();
    match commands::dispatch(cfg) {
        Ok(report) => {
            report.print_summary();
            match &out {
                Some(path) => {
                    if let Err(e) = report.write(path) {
                        eprintln!("error: {e:#}");
                        std::process::exit(1);
                    }
                    println!("report written to {path}");
                }
                None => match report.to_json() {
                    Ok(body) => print!("{body}"),
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        std::process::exit(1);
                    }
                },
            }
            std::process::exit(report.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
