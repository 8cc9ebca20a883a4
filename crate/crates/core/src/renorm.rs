//! Constrained-quadratic renorming with certified equivalence constants.
//!
//! The central object is the truncated decomposition norm
//!
//! `|x|^2 = inf { gamma^2 ||sum_k C^k V2 x_k||^2 + sum_k beta(k)^2 ||x_k||^2
//!            : x = sum_{k=0}^{d} T^k x_k }`.
//!
//! With `A = [I, T, ..., T^d]`, `B = gamma [V2, C V2, ..., C^d V2]` and
//! `D = blockdiag(beta(k) I)`, the infimum is the exact quadratic form
//! `x* G x` with `G = (A Q^{-1} A*)^{-1}`, `Q = D^2 + B* B`. Since `B` has
//! few rows, `Q^{-1}` collapses through the low-rank update formula and no
//! large system is ever formed. Dropping the `C`-term entirely (the
//! spectral-radius renorming) leaves `G = (sum_k T^k T^k* / beta(k)^2)^{-1}`.
//!
//! The norm equivalence bracket
//! `[||V1||^2/gamma^2 + s_d^2]^{-1/2} ||x|| <= |x| <=
//!  [gamma^2 ||V2||^2 + beta(0)^2]^{1/2} ||x||`
//! holds at every finite depth because both sides only use finite
//! decompositions, and `gamma = sqrt(beta(0) ||V1||/(s ||V2||))` turns the
//! product of the two constants into `||V1|| ||V2|| + beta(0) s`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{matpoly_eval, MatrixPolynomial, Operator};
use crate::nearness::factored_nearness;
use crate::sequences::BetaWeight;
use crate::shifts::truncated_weighted_shift;

/// Factored comparison data: T^n is matched against V1 C^n V2.
#[derive(Debug, Clone)]
pub struct FactoredData {
    pub c: Operator,
    pub v1: Operator,
    pub v2: Operator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaChoice {
    Auto,
    Value(f64),
}

#[derive(Debug, Clone)]
pub struct RenormConfig {
    pub t: Operator,
    /// `None` drops the C-term of the objective entirely.
    pub factor: Option<FactoredData>,
    pub beta: BetaWeight,
    pub gamma: GammaChoice,
    /// Decomposition truncation degree d.
    pub depth: usize,
}

impl RenormConfig {
    pub fn rota(t: Operator, beta: BetaWeight, depth: usize) -> Self {
        RenormConfig {
            t,
            factor: None,
            beta,
            gamma: GammaChoice::Auto,
            depth,
        }
    }

    pub fn factored(
        t: Operator,
        c: Operator,
        v1: Operator,
        v2: Operator,
        beta: BetaWeight,
        gamma: GammaChoice,
        depth: usize,
    ) -> Self {
        RenormConfig {
            t,
            factor: Some(FactoredData { c, v1, v2 }),
            beta,
            gamma,
            depth,
        }
    }
}

/// Renorming output: the Gram matrix of the decomposition norm, its square
/// root, the transformed operator and the certified constants.
#[derive(Debug, Clone, Serialize)]
pub struct GramCertificate {
    pub gram: Operator,
    pub l: Operator,
    pub l_inv: Operator,
    pub t1: Operator,
    /// Truncated nearness used in the bounds (powers of T vs the factored
    /// powers; in spectral-radius mode, vs zero).
    pub s_d: f64,
    /// The gamma actually used; absent when the C-term is dropped.
    pub gamma: Option<f64>,
    pub eig_lo: f64,
    pub eig_hi: f64,
    /// Lower equivalence constant: sqrt(eig_lo) >= bound_lo - 1e-8.
    pub bound_lo: f64,
    /// Upper equivalence constant: sqrt(eig_hi) <= bound_hi + 1e-8.
    pub bound_hi: f64,
    /// ||L|| ||L^{-1}|| as computed.
    pub sim_const: f64,
    /// ||V1|| ||V2|| + beta(0) s_d (with V1 = V2 = I when C is absent).
    pub sim_bound: f64,
    pub depth: usize,
}

impl GramCertificate {
    /// The renormed length `|x| = sqrt(x* G x)`.
    pub fn norm_of(&self, x: &[Complex64]) -> f64 {
        let n = self.gram.rows();
        assert!(x.len() % n == 0, "vector length must be a multiple of {n}");
        let mut total = 0.0;
        for chunk in x.chunks(n) {
            let gx = self.gram.matvec(chunk);
            total += crate::linalg::dot(chunk, &gx).re;
        }
        total.max(0.0).sqrt()
    }
}

/// Optimal gamma for the equivalence-constant product, or the branch marker
/// for exact factorizations (s = 0), where the shift can be dropped and any
/// large gamma approaches the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaOpt {
    Value(f64),
    SZeroBranch,
}

pub fn gamma_opt(v1: &Operator, v2: &Operator, beta0: f64, s: f64) -> Result<GammaOpt> {
    let v2_norm = v2.op_norm();
    if v2_norm <= 0.0 {
        return Err(Error::InvalidParam(
            "gamma choice needs a nonzero V2".into(),
        ));
    }
    if s <= 0.0 {
        return Ok(GammaOpt::SZeroBranch);
    }
    // The adjoint has the same norm; computed from V1 directly.
    let v1_norm = v1.op_norm();
    Ok(GammaOpt::Value((beta0 * v1_norm / (s * v2_norm)).sqrt()))
}

/// Exact minimization of the truncated decomposition norm at p = 2.
pub fn build_gram(cfg: &RenormConfig) -> Result<GramCertificate> {
    let t = &cfg.t;
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let n = t.rows();
    let d = cfg.depth;
    let beta0 = cfg.beta.beta(0)?;

    // Powers of T and the weighted power sum M = sum_k T^k T^k* / beta(k)^2.
    let mut m = Operator::zeros(n, n);
    let mut t_pow = Operator::identity(n);
    let mut t_powers = Vec::with_capacity(d + 1);
    let mut min_beta_sq = f64::INFINITY;
    let mut max_beta_sq = 0.0f64;
    for k in 0..=d {
        let b = cfg.beta.beta(k)?;
        min_beta_sq = min_beta_sq.min(b * b);
        max_beta_sq = max_beta_sq.max(b * b);
        m.axpy(
            Complex64::new(1.0 / (b * b), 0.0),
            &t_pow.mul_adjoint(&t_pow),
        );
        t_powers.push(t_pow.clone());
        if k < d {
            t_pow = t_pow.mul(t);
        }
    }
    let m = m.hermitize();

    let (gram_inv, s_d, gamma, bound_lo, bound_hi, sim_bound) = match &cfg.factor {
        None => {
            // Spectral-radius mode: G^{-1} = M, and the row-form constant is
            // exactly the top eigenvalue of M (the k = 0 identity term
            // shifts the spectrum, so the nearness-to-zero part is
            // lambda_max(M) - beta(0)^{-2}).
            let m_norm = m.op_norm();
            let s_sq = (m_norm - 1.0 / (beta0 * beta0)).max(0.0);
            let s_d = s_sq.sqrt();
            let bound_lo = m_norm.powf(-0.5);
            let bound_hi = beta0;
            // sqrt(1 + beta0^2 s^2) <= 1 + beta0 s
            let sim_bound = 1.0 + beta0 * s_d;
            (m, s_d, None, bound_lo, bound_hi, sim_bound)
        }
        Some(f) => {
            let kc = f.c.rows();
            if !f.c.is_square()
                || f.v1.rows() != n
                || f.v1.cols() != kc
                || f.v2.rows() != kc
                || f.v2.cols() != n
            {
                return Err(Error::DimensionMismatch {
                    context: "factored renorm operands",
                    left: format!("T {}x{}, V1 {}x{}", n, n, f.v1.rows(), f.v1.cols()),
                    right: format!(
                        "C {}x{}, V2 {}x{}",
                        f.c.rows(),
                        f.c.cols(),
                        f.v2.rows(),
                        f.v2.cols()
                    ),
                });
            }
            let s_d = factored_nearness(t, &f.v1, &f.c, &f.v2, &cfg.beta, d)?.s;
            let gamma = match cfg.gamma {
                GammaChoice::Value(g) => {
                    if !(g > 0.0 && g.is_finite()) {
                        return Err(Error::InvalidParam(format!("gamma must be positive, got {g}")));
                    }
                    g
                }
                GammaChoice::Auto => match gamma_opt(&f.v1, &f.v2, beta0, s_d)? {
                    GammaOpt::Value(g) => g,
                    // Exact factorization: any large gamma approaches the
                    // ||V1|| ||V2|| constant; a finite surrogate keeps the
                    // quadratic well-posed.
                    GammaOpt::SZeroBranch => {
                        (beta0 * f.v1.op_norm().max(1e-8) / (1e-8 * f.v2.op_norm())).sqrt()
                    }
                },
            };
            // C^k V2 stack and the two Woodbury pieces.
            let mut w = Operator::zeros(n, kc); // sum_k T^k (C^k V2)* gamma / beta^2
            let mut kmat = Operator::zeros(kc, kc); // gamma^2 sum_k (C^k V2)(C^k V2)* / beta^2
            let mut kraw = Operator::zeros(kc, kc); // unweighted, for conditioning
            let mut cv = f.v2.clone();
            for k in 0..=d {
                let b = cfg.beta.beta(k)?;
                let wfac = Complex64::new(gamma / (b * b), 0.0);
                w.axpy(wfac, &t_powers[k].mul_adjoint(&cv));
                let cvcv = cv.mul_adjoint(&cv);
                kmat.axpy(Complex64::new(gamma * gamma / (b * b), 0.0), &cvcv);
                kraw.axpy(Complex64::new(gamma * gamma, 0.0), &cvcv);
                if k < d {
                    cv = f.c.mul(&cv);
                }
            }
            // cond(Q) <= (max beta^2 + ||B B*||) / min beta^2.
            let cond = (max_beta_sq + kraw.hermitize().op_norm()) / min_beta_sq;
            if cond > 1e14 {
                return Err(Error::DegenerateWeights { cond });
            }
            let core = Operator::identity(kc).add(&kmat.hermitize());
            let solved = core.solve(&w.adjoint())?; // (I + K)^{-1} W*
            let gram_inv = m.sub(&w.mul(&solved)).hermitize();

            let v1n = f.v1.op_norm();
            let v2n = f.v2.op_norm();
            let bound_lo = (v1n * v1n / (gamma * gamma) + s_d * s_d).powf(-0.5);
            let bound_hi = (gamma * gamma * v2n * v2n + beta0 * beta0).sqrt();
            let sim_bound = v1n * v2n + beta0 * s_d;
            (gram_inv, s_d, Some(gamma), bound_lo, bound_hi, sim_bound)
        }
    };

    // Invert through the Hermitian eigendecomposition; this also supplies
    // the square root and the extreme eigenvalues.
    let (vals, vecs) = gram_inv.herm_eigen()?;
    let lam_min_inv = vals[0];
    if lam_min_inv <= 0.0 {
        return Err(Error::DegenerateWeights {
            cond: vals[vals.len() - 1] / lam_min_inv.abs().max(1e-300),
        });
    }
    let inv_vals: Vec<f64> = vals.iter().map(|v| 1.0 / v).collect();
    let sqrt_vals: Vec<f64> = inv_vals.iter().map(|v| v.sqrt()).collect();
    let inv_sqrt_vals: Vec<f64> = sqrt_vals.iter().map(|v| 1.0 / v).collect();
    let gram = crate::linalg::rebuild_hermitian(&inv_vals, &vecs);
    let l = crate::linalg::rebuild_hermitian(&sqrt_vals, &vecs);
    let l_inv = crate::linalg::rebuild_hermitian(&inv_sqrt_vals, &vecs);
    let eig_hi = 1.0 / lam_min_inv;
    let eig_lo = 1.0 / vals[vals.len() - 1];
    let t1 = l.mul(t).mul(&l_inv);
    let sim_const = l.op_norm() * l_inv.op_norm();
    Ok(GramCertificate {
        gram,
        l,
        l_inv,
        t1,
        s_d,
        gamma,
        eig_lo,
        eig_hi,
        bound_lo,
        bound_hi,
        sim_const,
        sim_bound,
        depth: d,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    /// sqrt(lambda_min(G)) - bound_lo; must exceed -1e-8.
    pub lower_margin: f64,
    /// bound_hi - sqrt(lambda_max(G)); must exceed -1e-8.
    pub upper_margin: f64,
    pub ok: bool,
    /// Violating eigenvector when a margin fails.
    pub witness: Option<Vec<[f64; 2]>>,
}

/// Check the equivalence bracket on the spectrum of G.
pub fn equivalence_check(cert: &GramCertificate) -> Result<EquivalenceReport> {
    let lower_margin = cert.eig_lo.sqrt() - cert.bound_lo;
    let upper_margin = cert.bound_hi - cert.eig_hi.sqrt();
    let ok = lower_margin >= -1e-8 && upper_margin >= -1e-8;
    let witness = if ok {
        None
    } else {
        let (vals, vecs) = cert.gram.herm_eigen()?;
        let idx = if lower_margin < -1e-8 { 0 } else { vals.len() - 1 };
        Some(
            (0..vecs.rows())
                .map(|i| {
                    let z = vecs[(i, idx)];
                    [z.re, z.im]
                })
                .collect(),
        )
    };
    Ok(EquivalenceReport {
        lower_margin,
        upper_margin,
        ok,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceStepReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
    /// Norm of P evaluated at the comparison operator (absent when the
    /// C-term is dropped).
    pub poly_norm_c: Option<f64>,
    /// Norm of P at the truncated weighted shift.
    pub poly_norm_shift: f64,
    pub shift_truncation: usize,
}

/// The re-decomposition inequality
/// `|P(T) x|_{d+e} <= max(||P(C)||, ||P(S_w)||) |x|_d`.
///
/// Every length-(d+1) decomposition of x convolves with the coefficients of
/// P into a length-(d+e+1) decomposition of P(T)x, so the inequality is
/// exact at these truncation indices; the shift is truncated far enough
/// (d + e + deg P + 4 fibers) that the convolved support never feels it.
pub fn dominance_step_check(
    cfg: &RenormConfig,
    p: &MatrixPolynomial,
    x: &[Complex64],
    extra_depth: usize,
) -> Result<DominanceStepReport> {
    let deg = p.degree();
    if deg > extra_depth {
        return Err(Error::InvalidParam(format!(
            "polynomial degree {deg} exceeds the extra depth {extra_depth}"
        )));
    }
    let n = cfg.t.rows();
    if x.len() != n * p.size() {
        return Err(Error::DimensionMismatch {
            context: "dominance step vector",
            left: (n * p.size()).to_string(),
            right: x.len().to_string(),
        });
    }
    let cert_d = build_gram(cfg)?;
    let mut deep = cfg.clone();
    deep.depth = cfg.depth + extra_depth;
    if let Some(g) = cert_d.gamma {
        // Reuse the shallow certificate's gamma so both norms share weights.
        deep.gamma = GammaChoice::Value(g);
    }
    let cert_de = build_gram(&deep)?;

    let pt = matpoly_eval(p, &cfg.t);
    let y = pt.matvec(x);
    let lhs = cert_de.norm_of(&y);

    let poly_norm_c = match &cfg.factor {
        Some(f) => Some(matpoly_eval(p, &f.c).op_norm()),
        None => None,
    };
    let fibers = cfg.depth + extra_depth + deg + 4;
    let shift = truncated_weighted_shift(&cfg.beta, fibers.max(2), 1)?;
    let poly_norm_shift = matpoly_eval(p, &shift.matrix).op_norm();
    let factor = poly_norm_c.unwrap_or(0.0).max(poly_norm_shift);
    let rhs = factor * cert_d.norm_of(x);
    let ok = lhs <= rhs + 1e-8 * rhs;
    Ok(DominanceStepReport {
        lhs,
        rhs,
        ok,
        poly_norm_c,
        poly_norm_shift,
        shift_truncation: fibers,
    })
}

/// Decomposition norm for general p > 1 by projected descent over
/// length-(d+1) decompositions (the C-term-free objective).
///
/// Minimizes `sum_k beta(k)^p ||x_k||^p` subject to `sum_k T^k x_k = x` by
/// gradient projection onto the affine constraint with backtracking; the
/// p = 2 value must match the closed-form Gram quadratic.
pub fn banach_norm_value(
    t: &Operator,
    x: &[Complex64],
    p: f64,
    beta: &BetaWeight,
    depth: usize,
) -> Result<f64> {
    if p <= 1.0 {
        return Err(Error::InvalidParam(format!("p must exceed 1, got {p}")));
    }
    if !t.is_square() || x.len() != t.rows() {
        return Err(Error::DimensionMismatch {
            context: "banach norm operands",
            left: t.rows().to_string(),
            right: x.len().to_string(),
        });
    }
    let n = t.rows();
    let d = depth;
    let betas: Vec<f64> = (0..=d).map(|k| beta.beta(k)).collect::<Result<_>>()?;

    // Stacked constraint A X = x with A = [I, T, ..., T^d]; the projection
    // onto the affine slice uses (A A*)^{-1} once.
    let mut t_powers = Vec::with_capacity(d + 1);
    let mut pow = Operator::identity(n);
    for k in 0..=d {
        t_powers.push(pow.clone());
        if k < d {
            pow = pow.mul(t);
        }
    }
    let mut aa = Operator::zeros(n, n);
    for tp in &t_powers {
        aa.axpy(Complex64::new(1.0, 0.0), &tp.mul_adjoint(tp));
    }
    let aa = aa.hermitize();
    let apply_a = |xs: &[Vec<Complex64>]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (tp, xk) in t_powers.iter().zip(xs) {
            for (o, v) in out.iter_mut().zip(tp.matvec(xk)) {
                *o += v;
            }
        }
        out
    };
    let project = |xs: &mut [Vec<Complex64>], target: &[Complex64]| -> Result<()> {
        let ax = apply_a(xs);
        let resid: Vec<Complex64> = ax.iter().zip(target).map(|(a, b)| a - b).collect();
        let mut rhs = Operator::zeros(n, 1);
        for (i, v) in resid.iter().enumerate() {
            rhs[(i, 0)] = *v;
        }
        let lam = aa.solve(&rhs)?;
        let lam_vec: Vec<Complex64> = (0..n).map(|i| lam[(i, 0)]).collect();
        for (tp, xk) in t_powers.iter().zip(xs.iter_mut()) {
            let corr = tp.adjoint_matvec(&lam_vec);
            for (xi, ci) in xk.iter_mut().zip(corr) {
                *xi -= ci;
            }
        }
        Ok(())
    };
    let objective = |xs: &[Vec<Complex64>]| -> f64 {
        xs.iter()
            .zip(&betas)
            .map(|(xk, &b)| b.powf(p) * crate::linalg::vec_norm(xk).powf(p))
            .sum()
    };

    // Feasible start: the minimum-2-norm decomposition.
    let mut xs: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; d + 1];
    project(&mut xs, x)?;

    let max_iter = 100_000usize;
    let tol = 1e-8;
    let mut f_val = objective(&xs);
    let mut step = 1.0 / (p * betas.iter().map(|b| b.powf(p)).fold(0.0, f64::max)).max(1e-8);
    let mut converged = false;
    let mut iters = 0usize;
    while iters < max_iter {
        iters += 1;
        // Gradient of beta^p ||v||^p is p beta^p ||v||^{p-2} v.
        let grads: Vec<Vec<Complex64>> = xs
            .iter()
            .zip(&betas)
            .map(|(xk, &b)| {
                let nk = crate::linalg::vec_norm(xk);
                let scale = if nk > 1e-300 {
                    p * b.powf(p) * nk.powf(p - 2.0)
                } else {
                    0.0
                };
                xk.iter().map(|&v| v * scale).collect()
            })
            .collect();
        let mut improved = false;
        for _ in 0..60 {
            let mut trial: Vec<Vec<Complex64>> = xs
                .iter()
                .zip(&grads)
                .map(|(xk, gk)| {
                    xk.iter()
                        .zip(gk)
                        .map(|(&v, &g)| v - g * step)
                        .collect()
                })
                .collect();
            project(&mut trial, x)?;
            let f_trial = objective(&trial);
            if f_trial < f_val {
                let rel = (f_val - f_trial) / f_val.max(1e-300);
                xs = trial;
                f_val = f_trial;
                improved = true;
                if rel < tol {
                    converged = true;
                }
                step *= 1.3;
                break;
            }
            step *= 0.5;
            if step < 1e-18 {
                break;
            }
        }
        if converged || !improved {
            converged = converged || !improved;
            break;
        }
    }
    let value = f_val.powf(1.0 / p);
    if !converged {
        return Err(Error::NoConvergence {
            iters,
            best: value,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn scalar_op(v: f64) -> Operator {
        Operator::from_real_rows(&[&[v]])
    }

    #[test]
    fn rota_scalar_closed_form() {
        // G = (sum_{k<=d} t^{2k})^{-1} = (1 - t^2)/(1 - t^{2(d+1)}).
        let t = 0.5f64;
        for d in [3usize, 10, 20] {
            let cfg = RenormConfig::rota(scalar_op(t), BetaWeight::one(), d);
            let cert = build_gram(&cfg).unwrap();
            let expect = (1.0 - t * t) / (1.0 - t.powi(2 * (d as i32 + 1)));
            assert!(
                (cert.gram[(0, 0)].re - expect).abs() < 1e-12,
                "d = {d}: {} vs {expect}",
                cert.gram[(0, 0)].re
            );
        }
        // G tends to 1 - t^2 as d grows.
        let cfg = RenormConfig::rota(scalar_op(t), BetaWeight::one(), 60);
        let cert = build_gram(&cfg).unwrap();
        assert!((cert.gram[(0, 0)].re - (1.0 - t * t)).abs() < 1e-12);
    }

    #[test]
    fn rota_zero_operator_gram_is_identity() {
        for d in [0usize, 3, 9] {
            let cfg = RenormConfig::rota(Operator::zeros(3, 3), BetaWeight::one(), d);
            let cert = build_gram(&cfg).unwrap();
            assert!(cert.gram.sub(&Operator::identity(3)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn factored_depth_zero_single_term() {
        // C = T, V1 = V2 = I, d = 0: the only decomposition is x_0 = x, so
        // G = (gamma^2 + beta0^2) I and T is unchanged.
        let mut rng = instances::stream_rng(17, "renorm-d0");
        let t = instances::ginibre(&mut rng, 3, 3).scale_re(0.3);
        let id = Operator::identity(3);
        let gamma = 0.7;
        let cfg = RenormConfig::factored(
            t.clone(),
            t.clone(),
            id.clone(),
            id.clone(),
            BetaWeight::one(),
            GammaChoice::Value(gamma),
            0,
        );
        let cert = build_gram(&cfg).unwrap();
        let expect = Operator::identity(3).scale_re(gamma * gamma + 1.0);
        assert!(cert.gram.sub(&expect).op_norm() < 1e-10);
        assert!(cert.t1.sub(&t).op_norm() < 1e-9);
        assert!(cert.s_d < 1e-12);
    }

    #[test]
    fn gamma_opt_values() {
        let id = Operator::identity(2);
        match gamma_opt(&id, &id, 1.0, 1.0).unwrap() {
            GammaOpt::Value(g) => assert!((g - 1.0).abs() < 1e-15),
            _ => panic!("expected a value"),
        }
        let v1 = Operator::diag_re(&[4.0, 1.0]);
        match gamma_opt(&v1, &id, 1.0, 1.0).unwrap() {
            GammaOpt::Value(g) => assert!((g - 2.0).abs() < 1e-15),
            _ => panic!("expected a value"),
        }
        assert_eq!(
            gamma_opt(&id, &id, 1.0, 0.0).unwrap(),
            GammaOpt::SZeroBranch
        );
        assert!(gamma_opt(&id, &Operator::zeros(2, 2), 1.0, 1.0).is_err());
    }

    #[test]
    fn equivalence_bracket_rota_scalar() {
        let cfg = RenormConfig::rota(scalar_op(0.5), BetaWeight::one(), 20);
        let cert = build_gram(&cfg).unwrap();
        assert!(cert.eig_lo >= 1.0 - 0.25 - 1e-12);
        assert!(cert.eig_hi <= 1.0 + 1e-12);
        let rep = equivalence_check(&cert).unwrap();
        assert!(rep.ok, "margins {} {}", rep.lower_margin, rep.upper_margin);
    }

    #[test]
    fn equivalence_bracket_zero_operator() {
        let cfg = RenormConfig::rota(Operator::zeros(4, 4), BetaWeight::one(), 8);
        let cert = build_gram(&cfg).unwrap();
        let rep = equivalence_check(&cert).unwrap();
        assert!(rep.ok);
        assert!((cert.eig_lo - 1.0).abs() < 1e-12 && (cert.eig_hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equivalence_bracket_random_factored() {
        for seed in 0..8 {
            let t = instances::gen_instance("ginibre", 4, 0.8, seed).unwrap();
            let mut rng = instances::stream_rng(seed, "factored-bracket");
            let kc = 5;
            let c = instances::ginibre(&mut rng, kc, kc).scale_re(0.25);
            let v1 = instances::ginibre(&mut rng, 4, kc);
            let v2 = instances::ginibre(&mut rng, kc, 4);
            let cfg = RenormConfig::factored(
                t,
                c,
                v1,
                v2,
                BetaWeight::one(),
                GammaChoice::Auto,
                24,
            );
            let cert = build_gram(&cfg).unwrap();
            let rep = equivalence_check(&cert).unwrap();
            assert!(
                rep.ok,
                "seed {seed}: margins {} {}",
                rep.lower_margin, rep.upper_margin
            );
            // Similarity constant bound with the optimal gamma.
            assert!(
                cert.sim_const <= cert.sim_bound * (1.0 + 1e-6),
                "seed {seed}: {} vs {}",
                cert.sim_const,
                cert.sim_bound
            );
        }
    }

    #[test]
    fn gram_monotone_in_depth() {
        // Longer decompositions only lower the infimum.
        let t = instances::gen_instance("ginibre", 4, 0.85, 3).unwrap();
        let mut rng = instances::stream_rng(3, "depth-monotone");
        let mut prev: Option<Operator> = None;
        for d in [2usize, 4, 8, 16] {
            let cfg = RenormConfig::rota(t.clone(), BetaWeight::one(), d);
            let cert = build_gram(&cfg).unwrap();
            if let Some(pg) = prev {
                for _ in 0..20 {
                    let x = instances::random_unit_vector(&mut rng, 4);
                    let now = cert.norm_of(&x);
                    let before = GramCertificate::norm_of(
                        &GramCertificate {
                            gram: pg.clone(),
                            ..cert.clone()
                        },
                        &x,
                    );
                    assert!(now * now <= before * before + 1e-10);
                }
            }
            prev = Some(cert.gram.clone());
        }
    }

    #[test]
    fn rota_contracts_when_depth_covers_decay() {
        for seed in 0..6 {
            let t = instances::gen_instance("ginibre", 6, 0.9, seed).unwrap();
            let cfg = RenormConfig::rota(t.clone(), BetaWeight::one(), 48);
            let cert = build_gram(&cfg).unwrap();
            let norm = cert.t1.op_norm();
            assert!(norm <= 1.0 + 1e-8, "seed {seed}: ||T1|| = {norm}");
        }
    }

    #[test]
    fn hilbertian_matrix_inequality() {
        // For any scalar matrix with top singular value <= 1, the renormed
        // column norms satisfy sum_i |sum_j a_ij x_j|^2 <= sum_j |x_j|^2,
        // because the renormed norm is a Hilbert norm.
        let t = instances::gen_instance("ginibre", 4, 0.7, 11).unwrap();
        let cfg = RenormConfig::rota(t, BetaWeight::one(), 16);
        let cert = build_gram(&cfg).unwrap();
        let mut rng = instances::stream_rng(11, "hilbertian");
        for _ in 0..20 {
            let k = 3usize;
            let mut a = instances::ginibre(&mut rng, k, k);
            let na = a.op_norm();
            if na > 1.0 {
                a = a.scale_re(1.0 / na);
            }
            let xs: Vec<Vec<Complex64>> = (0..k)
                .map(|_| instances::random_unit_vector(&mut rng, 4))
                .collect();
            let mut lhs = 0.0;
            for i in 0..k {
                let mut yi = vec![Complex64::new(0.0, 0.0); 4];
                for (j, xj) in xs.iter().enumerate() {
                    for (y, &v) in yi.iter_mut().zip(xj) {
                        *y += a[(i, j)] * v;
                    }
                }
                let norm = cert.norm_of(&yi);
                lhs += norm * norm;
            }
            let rhs: f64 = xs
                .iter()
                .map(|xj| {
                    let v = cert.norm_of(xj);
                    v * v
                })
                .sum();
            assert!(lhs <= rhs + 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn dominance_step_constant_poly_is_depth_monotonicity() {
        let t = instances::gen_instance("ginibre", 3, 0.8, 21).unwrap();
        let cfg = RenormConfig::rota(t, BetaWeight::one(), 10);
        let p = MatrixPolynomial::scalar_re(&[1.0]);
        let mut rng = instances::stream_rng(21, "dom-const");
        let x = instances::random_unit_vector(&mut rng, 3);
        let rep = dominance_step_check(&cfg, &p, &x, 2).unwrap();
        assert!(rep.ok, "lhs {} rhs {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn dominance_step_scalar_shift_bound() {
        // |t x|_{d+1} <= ||S_trunc|| |x|_d with unit weights: shift norm 1.
        let cfg = RenormConfig::rota(scalar_op(0.6), BetaWeight::one(), 12);
        let p = MatrixPolynomial::monomial(1);
        let x = vec![Complex64::new(1.0, 0.0)];
        let rep = dominance_step_check(&cfg, &p, &x, 1).unwrap();
        assert!(rep.ok);
        assert!((rep.poly_norm_shift - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dominance_step_random_factored_trials() {
        let mut rng = instances::stream_rng(5, "dom-random");
        for seed in 0..5 {
            let t = instances::gen_instance("ginibre", 3, 0.75, 100 + seed).unwrap();
            let c = truncated_weighted_shift(&BetaWeight::one(), 6, 1)
                .unwrap()
                .matrix;
            let v1 = instances::ginibre(&mut rng, 3, 6);
            let v2 = instances::ginibre(&mut rng, 6, 3);
            let cfg = RenormConfig::factored(
                t,
                c,
                v1,
                v2,
                BetaWeight::one(),
                GammaChoice::Auto,
                10,
            );
            for _ in 0..10 {
                let deg = 3usize;
                let coeffs: Vec<Complex64> = (0..=deg)
                    .map(|_| instances::complex_gaussian(&mut rng))
                    .collect();
                let p = MatrixPolynomial::scalar(&coeffs);
                let x = instances::random_unit_vector(&mut rng, 3);
                let rep = dominance_step_check(&cfg, &p, &x, deg).unwrap();
                assert!(rep.ok, "seed {seed}: lhs {} rhs {}", rep.lhs, rep.rhs);
            }
        }
    }

    #[test]
    fn banach_norm_zero_operator_any_p() {
        let t = Operator::zeros(3, 3);
        let mut rng = instances::stream_rng(30, "banach-zero");
        let x = instances::random_unit_vector(&mut rng, 3);
        for p in [2.0, 4.0] {
            let v = banach_norm_value(&t, &x, p, &BetaWeight::one(), 6).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "p = {p}: {v}");
        }
        // beta(0) scales the only feasible decomposition.
        let beta = BetaWeight::constant(2.5).unwrap();
        let v = banach_norm_value(&t, &x, 3.0, &beta, 4).unwrap();
        assert!((v - 2.5).abs() < 1e-7);
    }

    #[test]
    fn banach_norm_matches_gram_at_p_two() {
        let t = scalar_op(0.5);
        let x = vec![Complex64::new(1.0, 0.0)];
        for d in [4usize, 12, 24] {
            let v = banach_norm_value(&t, &x, 2.0, &BetaWeight::one(), d).unwrap();
            let cfg = RenormConfig::rota(t.clone(), BetaWeight::one(), d);
            let cert = build_gram(&cfg).unwrap();
            let gram_v = cert.norm_of(&x);
            assert!(
                (v - gram_v).abs() <= 1e-6 * gram_v,
                "d = {d}: descent {v} vs gram {gram_v}"
            );
        }
    }
}
