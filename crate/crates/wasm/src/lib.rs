//! Browser bindings for the interactive demo page.
//!
//! Three explorable views, each a JSON-in/JSON-out function so the page
//! stays a single static file:
//!
//! - [`rota_curve`]: how the renormed operator norm and the similarity
//!   constant move as the decomposition depth grows;
//! - [`crho_field`]: the minimum eigenvalue field of the dilation-class
//!   positivity criterion over a polar grid of the disk;
//! - [`foguel_decay`]: block-Hankel power-difference norms against their
//!   tail bounds.
//!
//! The functions are plain Rust on non-wasm targets, so the same code is
//! unit-tested natively.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::wasm_bindgen;

use opsim_core::car::{foguel_hankel, power_diff_norm};
use opsim_core::dilation::{crho_positivity, PositivityVerdict, RhoSeq};
use opsim_core::instances;
use opsim_core::renorm::{build_gram, RenormConfig};
use opsim_core::sequences::{AlphaSeq, BetaWeight};
use opsim_core::Operator;

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

#[derive(Deserialize)]
struct RotaRequest {
    n: usize,
    spectral_radius: f64,
    seed: u64,
    d_max: usize,
    #[serde(default = "default_step")]
    d_step: usize,
}

fn default_step() -> usize {
    2
}

#[derive(Serialize)]
struct RotaResponse {
    depths: Vec<usize>,
    t1_norms: Vec<f64>,
    sim_consts: Vec<f64>,
    sim_bounds: Vec<f64>,
    eig_lo: Vec<f64>,
    eig_hi: Vec<f64>,
    original_norm: f64,
}

/// Renorming curve: `||L T L^{-1}||` and the similarity constant as
/// functions of the decomposition depth, for a seeded matrix rescaled to
/// the requested spectral radius.
#[wasm_bindgen]
pub fn rota_curve(request: &str) -> String {
    let req: RotaRequest = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    if req.n == 0 || req.n > 24 || req.d_max > 128 || !(req.spectral_radius > 0.0) {
        return err_json("supported ranges: 1 <= n <= 24, d_max <= 128, radius > 0");
    }
    let t = match instances::gen_instance("ginibre", req.n, req.spectral_radius, req.seed) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    let mut resp = RotaResponse {
        depths: Vec::new(),
        t1_norms: Vec::new(),
        sim_consts: Vec::new(),
        sim_bounds: Vec::new(),
        eig_lo: Vec::new(),
        eig_hi: Vec::new(),
        original_norm: t.op_norm(),
    };
    let mut d = 0usize;
    while d <= req.d_max {
        match build_gram(&RenormConfig::rota(t.clone(), BetaWeight::one(), d)) {
            Ok(cert) => {
                resp.depths.push(d);
                resp.t1_norms.push(cert.t1.op_norm());
                resp.sim_consts.push(cert.sim_const);
                resp.sim_bounds.push(cert.sim_bound);
                resp.eig_lo.push(cert.eig_lo);
                resp.eig_hi.push(cert.eig_hi);
            }
            Err(e) => return err_json(e),
        }
        d += req.d_step.max(1);
    }
    serde_json::to_string(&resp).unwrap_or_else(err_json)
}

#[derive(Deserialize)]
struct CrhoRequest {
    /// Entries [[re, im]; 4] of a 2x2 operator, row-major.
    t: [[f64; 2]; 4],
    rho: f64,
    r_max: f64,
    angles: usize,
    n_trunc: usize,
}

#[derive(Serialize)]
struct CrhoResponse {
    grid_radii: usize,
    grid_angles: usize,
    /// Radius-major minimum eigenvalues of the Hermitian part.
    field: Vec<f64>,
    min_eig: f64,
    tail_bound: f64,
    verdict: String,
    witness: [f64; 2],
}

/// Minimum-eigenvalue field of `Re[I + sum 2 lambda^n T^n / rho]` over a
/// polar grid, plus the certified verdict.
#[wasm_bindgen]
pub fn crho_field(request: &str) -> String {
    let req: CrhoRequest = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    if !(req.rho > 0.0) || req.angles > 512 || req.n_trunc > 256 {
        return err_json("supported ranges: rho > 0, angles <= 512, n_trunc <= 256");
    }
    let data: Vec<num_complex::Complex64> = req
        .t
        .iter()
        .map(|&[re, im]| num_complex::Complex64::new(re, im))
        .collect();
    let t = match Operator::new(2, 2, data) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    let rho = match RhoSeq::constant(req.rho) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let rep = match crho_positivity(&t, &rho, req.r_max, req.angles, req.n_trunc) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    // Re-evaluate the field for rendering (the report keeps the minimum).
    let mut field = Vec::with_capacity(rep.grid_radii * rep.grid_angles);
    let scaled: Vec<Operator> = {
        let mut out = Vec::new();
        let mut pow = t.clone();
        for _ in 1..=req.n_trunc {
            if pow.max_abs() == 0.0 {
                break;
            }
            out.push(pow.scale_re(2.0 / req.rho));
            pow = pow.mul(&t);
        }
        out
    };
    for ir in 1..=rep.grid_radii {
        let r = req.r_max * ir as f64 / rep.grid_radii as f64;
        for ia in 0..rep.grid_angles {
            let theta = std::f64::consts::TAU * ia as f64 / rep.grid_angles as f64;
            let lambda = num_complex::Complex64::from_polar(r, theta);
            let mut f = Operator::identity(2);
            let mut lam_pow = num_complex::Complex64::new(1.0, 0.0);
            for s in &scaled {
                lam_pow *= lambda;
                f.axpy(lam_pow, s);
            }
            let vals = f.hermitize().herm_eigen().map(|(v, _)| v);
            field.push(vals.map(|v| v[0]).unwrap_or(f64::NAN));
        }
    }
    let resp = CrhoResponse {
        grid_radii: rep.grid_radii,
        grid_angles: rep.grid_angles,
        field,
        min_eig: rep.min_eig,
        tail_bound: rep.tail_bound,
        verdict: match rep.verdict {
            PositivityVerdict::Pass => "pass".into(),
            PositivityVerdict::Fail => "fail".into(),
            PositivityVerdict::Inconclusive => "inconclusive".into(),
        },
        witness: rep.witness,
    };
    serde_json::to_string(&resp).unwrap_or_else(err_json)
}

#[derive(Deserialize)]
struct FoguelRequest {
    /// "geometric" | "example32" | "pisier" | "explicit"
    kind: String,
    #[serde(default)]
    ratio: f64,
    #[serde(default)]
    table: Vec<f64>,
    fibers: usize,
    modes: usize,
}

#[derive(Serialize)]
struct FoguelResponse {
    ns: Vec<usize>,
    values: Vec<f64>,
    bounds: Vec<f64>,
    b2_partial: f64,
    b3_partial: f64,
}

/// Power-difference decay of the block Hankel operator of a sequence,
/// against the per-power tail bounds.
#[wasm_bindgen]
pub fn foguel_decay(request: &str) -> String {
    let req: FoguelRequest = match serde_json::from_str(request) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    if req.fibers == 0 || req.fibers > 4 || req.modes > 8 {
        return err_json("supported ranges: 1 <= fibers <= 4, modes <= 8");
    }
    let alpha = match req.kind.as_str() {
        "geometric" => AlphaSeq::geometric(req.ratio),
        "example32" => Ok(AlphaSeq::Example32),
        "pisier" => AlphaSeq::pisier(if req.ratio > 0.0 { req.ratio } else { 1.0 }),
        "explicit" => AlphaSeq::explicit(&req.table),
        other => return err_json(format!("unknown sequence kind `{other}`")),
    };
    let alpha = match alpha {
        Ok(a) => a,
        Err(e) => return err_json(e),
    };
    let fh = match foguel_hankel(&alpha, req.fibers, req.modes) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let mut resp = FoguelResponse {
        ns: Vec::new(),
        values: Vec::new(),
        bounds: Vec::new(),
        b2_partial: opsim_core::sequences::quantity_b(&alpha, 2.0, 4096)
            .map(|q| q.partial)
            .unwrap_or(f64::NAN),
        b3_partial: opsim_core::sequences::quantity_b(&alpha, 3.0, 4096)
            .map(|q| q.partial)
            .unwrap_or(f64::NAN),
    };
    for n in 1..=(2 * req.fibers - 1) {
        match power_diff_norm(&fh, n) {
            Ok(v) => {
                resp.ns.push(n);
                resp.values.push(v);
                resp.bounds
                    .push((n as f64 + 1.0) * alpha.tail_sq(n - 1).upper().sqrt());
            }
            Err(e) => return err_json(e),
        }
    }
    serde_json::to_string(&resp).unwrap_or_else(err_json)
}
