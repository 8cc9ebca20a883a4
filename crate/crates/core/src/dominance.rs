//! Sampled polynomial-dominance ratios.
//!
//! The least constant M with `||[p_ij(T1)]|| <= M ||[p_ij(T2)]||` over all
//! matrix polynomials is approached from below by sampling: each sampled
//! family member contributes the ratio of the two evaluated norms. Values
//! are always labelled lower bounds; no certified upper bound is attempted.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{circle_sup_norm, matpoly_eval, MatrixPolynomial, Operator};
use crate::nearness::{factored_nearness, NearnessReport};
use crate::sequences::BetaWeight;

/// Denominators below this floor are skipped (annihilating polynomials).
const DENOM_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    /// iid complex Gaussian coefficients, normalized on the circle.
    RandomCoeff,
    /// Products of (z-1) and (z+1) factors: peaky on the circle.
    ChebyshevLike,
    /// Coefficients vanishing through degree d-1.
    ZdVanishing,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PolyFamily {
    pub kind: FamilyKind,
    pub degree_max: usize,
    /// Vanishing order for the restricted family.
    pub vanishing_order: usize,
    pub count: usize,
    pub seed: u64,
}

impl PolyFamily {
    pub fn random_coeff(degree_max: usize, count: usize, seed: u64) -> Self {
        PolyFamily {
            kind: FamilyKind::RandomCoeff,
            degree_max,
            vanishing_order: 0,
            count,
            seed,
        }
    }

    pub fn zd_vanishing(order: usize, degree_max: usize, count: usize, seed: u64) -> Self {
        PolyFamily {
            kind: FamilyKind::ZdVanishing,
            degree_max,
            vanishing_order: order,
            count,
            seed,
        }
    }

    /// Sample the family at a matrix level. Scalar members are embedded
    /// diagonally first, so level-n families contain the level-1 family and
    /// ratios are monotone across levels by construction.
    pub fn sample(&self, level: usize) -> Vec<MatrixPolynomial> {
        let level = level.max(1);
        let mut rng = crate::instances::stream_rng(self.seed, "poly-family");
        let mut out = Vec::with_capacity(self.count);
        for idx in 0..self.count {
            // Alternate scalar-embedded and full matrix coefficients.
            let scalar_member = level == 1 || idx % 2 == 0;
            let p = match self.kind {
                FamilyKind::RandomCoeff | FamilyKind::ZdVanishing => {
                    let lo = if self.kind == FamilyKind::ZdVanishing {
                        self.vanishing_order
                    } else {
                        0
                    };
                    let deg = self.degree_max.max(lo);
                    if scalar_member {
                        let coeffs: Vec<Complex64> = (0..=deg)
                            .map(|d| {
                                if d < lo {
                                    Complex64::new(0.0, 0.0)
                                } else {
                                    crate::instances::complex_gaussian(&mut rng)
                                }
                            })
                            .collect();
                        MatrixPolynomial::diag_embed(&MatrixPolynomial::scalar(&coeffs), level)
                    } else {
                        let coeffs: Vec<Operator> = (0..=deg)
                            .map(|d| {
                                if d < lo {
                                    Operator::zeros(level, level)
                                } else {
                                    crate::instances::ginibre(&mut rng, level, level)
                                }
                            })
                            .collect();
                        MatrixPolynomial::new(coeffs)
                    }
                }
                FamilyKind::ChebyshevLike => {
                    // (z-1)^j (z+1)^(deg-j): alternating-sign coefficients
                    // with mass concentrated near +-1 on the circle.
                    use rand::Rng;
                    let deg = self.degree_max.max(1);
                    let j = rng.gen_range(0..=deg);
                    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
                    for factor in 0..deg {
                        let root = if factor < j { 1.0 } else { -1.0 };
                        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                        for (i, &c) in coeffs.iter().enumerate() {
                            next[i + 1] += c;
                            next[i] -= c * root;
                        }
                        coeffs = next;
                    }
                    MatrixPolynomial::diag_embed(&MatrixPolynomial::scalar(&coeffs), level)
                }
            };
            // Normalize on the circle for ratio conditioning.
            let sup = circle_sup_norm(&p, 256).value();
            if sup > DENOM_FLOOR {
                out.push(p.scale(1.0 / sup));
            } else {
                out.push(p);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceRatio {
    /// Largest sampled ratio: a lower bound on the dominance constant.
    pub max_ratio: f64,
    /// Index of the maximizing polynomial within the sampled family.
    pub witness_index: usize,
    /// Per-member ratios (NaN marks skipped members).
    pub ratios: Vec<f64>,
    pub skipped: usize,
}

/// Sampled lower bound on the dominance constant of T1 by T2 at a matrix
/// level. The witness polynomial is returned by index into `family.sample`.
pub fn dominance_ratio(
    t1: &Operator,
    t2: &Operator,
    family: &PolyFamily,
    level: usize,
) -> Result<(DominanceRatio, MatrixPolynomial)> {
    if level == 0 {
        return Err(Error::InvalidParam("level must be >= 1".into()));
    }
    let members = family.sample(level);
    let mut ratios = Vec::with_capacity(members.len());
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = None;
    let mut skipped = 0usize;
    for (i, p) in members.iter().enumerate() {
        let denom = matpoly_eval(p, t2).op_norm();
        if denom < DENOM_FLOOR {
            skipped += 1;
            ratios.push(f64::NAN);
            continue;
        }
        let num = matpoly_eval(p, t1).op_norm();
        let r = num / denom;
        ratios.push(r);
        if r > best {
            best = r;
            best_idx = Some(i);
        }
    }
    match best_idx {
        None => Err(Error::AnnihilatedFamily { skipped }),
        Some(i) => Ok((
            DominanceRatio {
                max_ratio: best,
                witness_index: i,
                ratios,
                skipped,
            },
            members[i].clone(),
        )),
    }
}

/// Sampled lower bound on the polynomial-boundedness constant: the ratio of
/// `||[p_ij(T)]||` against the circle supremum of the matrix polynomial.
pub fn paulsen_ratio(t: &Operator, family: &PolyFamily, level: usize) -> Result<f64> {
    if level == 0 {
        return Err(Error::InvalidParam("level must be >= 1".into()));
    }
    let members = family.sample(level);
    let mut best: f64 = 0.0;
    for p in &members {
        let denom = circle_sup_norm(p, 1024).value();
        if denom < DENOM_FLOOR {
            continue;
        }
        let num = matpoly_eval(p, t).op_norm();
        best = best.max(num / denom);
    }
    Ok(best)
}

/// Verify the eventual factorization `T^k = V1 C^k V2` for k >= d and feed
/// the nearness pipeline; the nearness sum is then supported on k < d.
///
/// Refuses when the identity fails: nearness is not established by this
/// route in that case.
pub fn zd_pipeline_check(
    t: &Operator,
    v1: &Operator,
    c: &Operator,
    v2: &Operator,
    vanishing_order: usize,
    n_max: usize,
) -> Result<NearnessReport> {
    let n_max = n_max.max(vanishing_order);
    let mut t_pow = Operator::identity(t.rows());
    let mut c_pow = Operator::identity(c.rows());
    for _ in 0..vanishing_order {
        t_pow = t_pow.mul(t);
        c_pow = c_pow.mul(c);
    }
    for k in vanishing_order..=n_max {
        let approx = v1.mul(&c_pow).mul(v2);
        let defect = t_pow.sub(&approx).op_norm();
        if defect > 1e-8 {
            return Err(Error::IdentityDefect { k, defect });
        }
        t_pow = t_pow.mul(t);
        c_pow = c_pow.mul(c);
    }
    let report = factored_nearness(t, v1, c, v2, &BetaWeight::one(), n_max)?;
    Ok(report)
}
