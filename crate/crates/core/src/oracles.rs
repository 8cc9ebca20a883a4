//! Brute-force oracles, structurally separate from the implementations they
//! check.
//!
//! Everything here favors clarity over speed: dense saddle-point solves,
//! explicit power assembly with binary exponentiation, full
//! eigendecompositions, random-restart ascent. Dimensions are capped at 256.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{pnorm, vec_norm, Operator};
use crate::sequences::BetaWeight;

const ORACLE_DIM_CAP: usize = 256;

fn check_cap(dim: usize) -> Result<()> {
    if dim > ORACLE_DIM_CAP {
        return Err(Error::InvalidParam(format!(
            "oracle capped at dimension {ORACLE_DIM_CAP}, got {dim}"
        )));
    }
    Ok(())
}

/// Minimum of `X* Q X` subject to `A X = x` through the dense saddle-point
/// system `[[Q, A*], [A, 0]] [X; mu] = [0; x]`.
pub fn kkt_min(q: &Operator, a: &Operator, x: &[Complex64]) -> Result<f64> {
    let m = q.rows();
    let n = a.rows();
    check_cap(m + n)?;
    if !q.is_square() || a.cols() != m || x.len() != n {
        return Err(Error::DimensionMismatch {
            context: "saddle-point oracle",
            left: format!("Q {}x{}, A {}x{}", q.rows(), q.cols(), a.rows(), a.cols()),
            right: x.len().to_string(),
        });
    }
    let dim = m + n;
    let mut kkt = Operator::zeros(dim, dim);
    kkt.set_block(0, 0, q);
    kkt.set_block(0, m, &a.adjoint());
    kkt.set_block(m, 0, a);
    let mut rhs = Operator::zeros(dim, 1);
    for (i, v) in x.iter().enumerate() {
        rhs[(m + i, 0)] = *v;
    }
    let sol = kkt.solve(&rhs)?;
    let xs: Vec<Complex64> = (0..m).map(|i| sol[(i, 0)]).collect();
    let qx = q.matvec(&xs);
    Ok(crate::linalg::dot(&xs, &qx).re)
}

/// Weighted power-difference sum norm, assembled entrywise from powers
/// computed by binary exponentiation and resolved by a full Hermitian
/// eigendecomposition.
pub fn direct_partial_sum_norm(
    t1: &Operator,
    t2: &Operator,
    beta: &BetaWeight,
    n_terms: usize,
) -> Result<f64> {
    check_cap(t1.rows())?;
    let dim = t1.rows();
    let mut acc = Operator::zeros(dim, dim);
    for n in 0..=n_terms {
        let b = beta.beta(n)?;
        let d = t1.pow_binary(n).sub(&t2.pow_binary(n));
        acc.axpy(Complex64::new(1.0 / (b * b), 0.0), &d.mul_adjoint(&d));
    }
    let (vals, _) = acc.hermitize().herm_eigen()?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Direct dense evaluation of `||R^n - R0^n||` (the subtraction route).
pub fn power_diff_norm_direct(r: &Operator, r0: &Operator, n: usize) -> Result<f64> {
    if r.rows() > 4096 {
        return Err(Error::InvalidParam(
            "dense power subtraction capped at 4096".into(),
        ));
    }
    Ok(r.pow(n).sub(&r0.pow(n)).op_norm())
}

/// Sampled lower bound on `sup ||A x||_p / ||x||_p` with coordinate-ascent
/// polishing. Every reported value is an actual quotient, hence a valid
/// lower bound.
pub fn unit_sphere_max(a: &Operator, p: f64, samples: usize, seed: u64) -> Result<f64> {
    check_cap(a.rows().max(a.cols()))?;
    if p <= 1.0 {
        return Err(Error::InvalidParam(format!("p must exceed 1, got {p}")));
    }
    let n = a.cols();
    let objective = |x: &[Complex64]| -> f64 {
        let nx = pnorm(x, p);
        if nx < 1e-300 {
            return 0.0;
        }
        pnorm(&a.matvec(x), p) / nx
    };
    let q = p / (p - 1.0);
    // Entrywise duality map z -> z |z|^(s-2).
    let duality = |v: &[Complex64], s: f64| -> Vec<Complex64> {
        v.iter()
            .map(|&z| {
                let m = z.norm();
                if m < 1e-300 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * m.powf(s - 2.0)
                }
            })
            .collect()
    };
    let mut rng = crate::instances::stream_rng(seed, "unit-sphere-max");
    let mut best = 0.0f64;
    for _ in 0..samples.max(1) {
        let mut x = crate::instances::random_unit_pvector(&mut rng, n, p);
        let mut val = objective(&x);
        // Fixed-point iteration x <- J_q(A* J_p(A x)): the p-norm power
        // method, exact power iteration at p = 2.
        for _ in 0..60 {
            let y = a.matvec(&x);
            let z = a.adjoint_matvec(&duality(&y, p));
            let mut next = duality(&z, q);
            let nn = pnorm(&next, p);
            if nn < 1e-300 {
                break;
            }
            for v in next.iter_mut() {
                *v /= Complex64::new(nn, 0.0);
            }
            let v = objective(&next);
            if v <= val + 1e-15 {
                x = next;
                val = val.max(v);
                break;
            }
            x = next;
            val = v;
        }
        // Coordinate ascent: probe each coordinate along +-1 and +-i with a
        // shrinking step.
        let mut step = 0.5;
        for _round in 0..40 {
            let mut improved = false;
            for j in 0..n {
                for dir in [
                    Complex64::new(step, 0.0),
                    Complex64::new(-step, 0.0),
                    Complex64::new(0.0, step),
                    Complex64::new(0.0, -step),
                ] {
                    let mut trial = x.clone();
                    trial[j] += dir;
                    let v = objective(&trial);
                    if v > val {
                        val = v;
                        x = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-9 {
                    break;
                }
            }
        }
        best = best.max(val);
    }
    Ok(best)
}

/// Sampled lower bound on the numerical radius `sup |<A x, x>| / ||x||^2`,
/// polished by alternating the optimal rotation angle with the top
/// eigenvector of the rotated Hermitian part.
pub fn numerical_radius_lower(a: &Operator, restarts: usize, seed: u64) -> Result<f64> {
    check_cap(a.rows())?;
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut rng = crate::instances::stream_rng(seed, "radius-ascent");
    let mut best = 0.0f64;
    for _ in 0..restarts.max(1) {
        let mut x = crate::instances::random_unit_vector(&mut rng, n);
        for _ in 0..30 {
            let ax = a.matvec(&x);
            let form = crate::linalg::dot(&x, &ax);
            best = best.max(form.norm());
            if form.norm() < 1e-300 {
                break;
            }
            // Rotate so the form is real positive, then move to the top
            // eigenvector of the Hermitian part at that angle.
            let theta = -form.arg();
            let herm = a.scale(Complex64::from_polar(1.0, theta)).hermitize();
            let (vals, vecs) = herm.herm_eigen()?;
            let top = vals.len() - 1;
            let next: Vec<Complex64> = (0..n).map(|i| vecs[(i, top)]).collect();
            let nn = vec_norm(&next);
            if nn < 1e-300 {
                break;
            }
            let next: Vec<Complex64> = next.into_iter().map(|z| z / nn).collect();
            if next
                .iter()
                .zip(&x)
                .map(|(u, v)| (u - v).norm_sqr())
                .sum::<f64>()
                .sqrt()
                < 1e-12
            {
                x = next;
                let form = crate::linalg::dot(&x, &a.matvec(&x));
                best = best.max(form.norm());
                break;
            }
            x = next;
        }
    }
    Ok(best)
}
