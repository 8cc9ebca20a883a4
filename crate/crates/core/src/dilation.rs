//! Dilation-class diagnostics.
//!
//! Membership in the class attached to a positive sequence (rho_n) is
//! equivalent to positivity of `Re[I + sum_{n>=1} 2 lambda^n T^n / rho_n]`
//! on the open unit disk. A finite tool certifies a compact sub-disk only:
//! the verdict carries the grid, the truncation and the tail bound, and
//! degrades to "inconclusive" whenever the tail is not controlled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;
use num_complex::Complex64;

/// Positive coefficient sequence rho_n, indexed from n = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RhoSeq {
    Const(f64),
    Table(Vec<f64>),
}

impl RhoSeq {
    pub fn constant(v: f64) -> Result<Self> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonPositiveWeight { index: 1, value: v });
        }
        Ok(RhoSeq::Const(v))
    }

    pub fn table(values: &[f64]) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(RhoSeq::Table(values.to_vec()))
    }

    /// rho_n for n >= 1.
    pub fn rho(&self, n: usize) -> Result<f64> {
        assert!(n >= 1, "rho is indexed from 1");
        match self {
            RhoSeq::Const(v) => Ok(*v),
            RhoSeq::Table(t) => t.get(n - 1).copied().ok_or_else(|| {
                Error::InvalidParam(format!("rho table of length {} has no entry {n}", t.len()))
            }),
        }
    }

    /// Infimum over n > n_lo, when known.
    fn inf_beyond(&self, n_lo: usize) -> Option<f64> {
        match self {
            RhoSeq::Const(v) => Some(*v),
            RhoSeq::Table(t) => {
                if n_lo >= t.len() {
                    None // tail of the table is unspecified
                } else {
                    t[n_lo..].iter().copied().reduce(f64::min)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PositivityVerdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub min_eig: f64,
    /// Geometric bound on the dropped series tail; infinite when the tail
    /// is not controlled.
    pub tail_bound: f64,
    pub verdict: PositivityVerdict,
    /// Grid point attaining the minimum eigenvalue, as (re, im).
    pub witness: [f64; 2],
    pub r_max: f64,
    pub grid_angles: usize,
    pub grid_radii: usize,
    pub n_trunc: usize,
}

/// Scan the Hermitian part of `I + sum_{n=1}^{n_trunc} 2 lambda^n T^n /
/// rho_n` on a polar grid of the disk of radius `r_max`.
///
/// The verdict passes when the grid minimum stays above the tail allowance,
/// fails when a grid point is negative beyond it, and is inconclusive when
/// the dropped tail cannot be bounded (neither a geometric envelope nor
/// nilpotency applies).
pub fn crho_positivity(
    t: &Operator,
    rho: &RhoSeq,
    r_max: f64,
    grid_angles: usize,
    n_trunc: usize,
) -> Result<PositivityReport> {
    if !(0.0 < r_max && r_max < 1.0) {
        return Err(Error::InvalidParam(format!(
            "need 0 < r_max < 1, got {r_max}"
        )));
    }
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let grid_angles = grid_angles.max(16);
    let grid_radii = 24usize;
    let n = t.rows();

    // Scaled powers 2 T^n / rho_n up to the truncation; detect nilpotency.
    let mut scaled = Vec::with_capacity(n_trunc);
    let mut pow = t.clone();
    let mut nilpotent_at: Option<usize> = None;
    for m in 1..=n_trunc {
        if pow.max_abs() == 0.0 {
            nilpotent_at = Some(m);
            break;
        }
        scaled.push(pow.scale_re(2.0 / rho.rho(m)?));
        pow = pow.mul(t);
    }
    // Tail control: nilpotent series have no tail; otherwise need
    // r_max ||T|| / inf rho < 1 for the geometric envelope.
    let t_norm = t.op_norm();
    let tail_bound = if nilpotent_at.is_some() {
        0.0
    } else {
        match rho.inf_beyond(n_trunc) {
            Some(rho_inf) if r_max * t_norm < 1.0 => {
                let q = r_max * t_norm;
                2.0 / rho_inf * q.powi(n_trunc as i32 + 1) / (1.0 - q)
            }
            _ => f64::INFINITY,
        }
    };

    let mut min_eig = f64::INFINITY;
    let mut witness = [0.0, 0.0];
    for ir in 1..=grid_radii {
        let r = r_max * ir as f64 / grid_radii as f64;
        for ia in 0..grid_angles {
            let theta = std::f64::consts::TAU * ia as f64 / grid_angles as f64;
            let lambda = Complex64::from_polar(r, theta);
            let mut f = Operator::identity(n);
            let mut lam_pow = Complex64::new(1.0, 0.0);
            for s in &scaled {
                lam_pow *= lambda;
                f.axpy(lam_pow, s);
            }
            let herm = f.hermitize();
            let (vals, _) = herm.herm_eigen()?;
            if vals[0] < min_eig {
                min_eig = vals[0];
                witness = [lambda.re, lambda.im];
            }
        }
    }
    let verdict = if tail_bound.is_infinite() {
        PositivityVerdict::Inconclusive
    } else if min_eig >= -tail_bound - 1e-10 {
        PositivityVerdict::Pass
    } else {
        PositivityVerdict::Fail
    };
    Ok(PositivityReport {
        min_eig,
        tail_bound,
        verdict,
        witness,
        r_max,
        grid_angles,
        grid_radii,
        n_trunc,
    })
}

/// Max over 1 <= n <= n_max of `||T^n - rho_n V* U^n V||` given dilation
/// data: U unitary and V an isometric embedding (both checked to 1e-10).
pub fn rho_dilation_check(
    t: &Operator,
    u: &Operator,
    v: &Operator,
    rho: &RhoSeq,
    n_max: usize,
) -> Result<f64> {
    let u_defect = u
        .adjoint_mul(u)
        .sub(&Operator::identity(u.cols()))
        .op_norm();
    if u_defect > 1e-10 || !u.is_square() {
        return Err(Error::NotUnitary { defect: u_defect });
    }
    let v_defect = v
        .adjoint_mul(v)
        .sub(&Operator::identity(v.cols()))
        .op_norm();
    if v_defect > 1e-10 {
        return Err(Error::NotIsometry { defect: v_defect });
    }
    if v.rows() != u.rows() || v.cols() != t.rows() || !t.is_square() {
        return Err(Error::DimensionMismatch {
            context: "dilation data",
            left: format!("T {}x{}, V {}x{}", t.rows(), t.cols(), v.rows(), v.cols()),
            right: format!("U {}x{}", u.rows(), u.cols()),
        });
    }
    let mut max_defect = 0.0f64;
    let mut t_pow = Operator::identity(t.rows());
    let mut u_pow = Operator::identity(u.rows());
    for m in 1..=n_max.max(1) {
        t_pow = t_pow.mul(t);
        u_pow = u_pow.mul(u);
        let compressed = v.adjoint_mul(&u_pow).mul(v).scale_re(rho.rho(m)?);
        max_defect = max_defect.max(t_pow.sub(&compressed).op_norm());
    }
    Ok(max_defect)
}

#[derive(Debug, Clone, Serialize)]
pub struct RaczReport {
    /// Partial sum `sum_{n<=N} (rho_{nk} - M)^2`.
    pub partial: f64,
    pub converged: bool,
    /// Midpoint integral estimate of the dropped tail, when the rule gives
    /// one (constant sequences have an exactly zero tail).
    pub tail_estimate: Option<f64>,
    /// The per-term nearness majorants |rho_{nk} - M| (capped in length).
    pub majorants: Vec<f64>,
}

/// The square-summability functional `sum_n (rho_{nk} - M)^2` feeding the
/// nearness route: each term majorizes the distance from the k-th power
/// compression at level n.
pub fn racz_deficiency(rho: &RhoSeq, k: usize, m_target: f64, n_terms: usize) -> Result<RaczReport> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be >= 1".into()));
    }
    if !(m_target > 0.0) {
        return Err(Error::InvalidParam(format!(
            "M must be positive, got {m_target}"
        )));
    }
    let mut partial = 0.0f64;
    let mut partial_centade = 0.0f64;
    let mut partial_decade = 0.0f64;
    let centade_mark = n_terms / 100;
    let decade_mark = n_terms / 10;
    let cap = 64usize;
    let mut majorants = Vec::with_capacity(cap.min(n_terms));
    for n in 1..=n_terms {
        let d = rho.rho(n * k)? - m_target;
        partial += d * d;
        if n == centade_mark {
            partial_centade = partial;
        }
        if n == decade_mark {
            partial_decade = partial;
        }
        if majorants.len() < cap {
            majorants.push(d.abs());
        }
    }
    // Growth diagnostic over the final decades: convergent tails shrink the
    // decade increments geometrically; doubling partials or non-decaying
    // increments both flag divergence (the latter catches logarithmic
    // growth, where partial sums never double).
    let inc_prev = partial_decade - partial_centade;
    let inc_last = partial - partial_decade;
    let scale = partial.max(1e-300);
    let doubling = partial_decade > 0.0 && partial > 2.0 * partial_decade;
    let stalled_decay =
        inc_prev > 1e-12 * scale && inc_last > 0.5 * inc_prev && inc_last > 1e-12 * scale;
    let converged = !(doubling || stalled_decay);
    let tail_estimate = match rho {
        RhoSeq::Const(v) => {
            if (*v - m_target).abs() == 0.0 {
                Some(0.0)
            } else {
                None // constant nonzero deviation: divergent, no tail
            }
        }
        RhoSeq::Table(_) => None,
    };
    Ok(RaczReport {
        partial,
        converged,
        tail_estimate,
        majorants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::shifts::schaeffer_dilation;

    fn jordan2() -> Operator {
        Operator::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]])
    }

    #[test]
    fn nilpotent_passes_rho_two() {
        // Numerical radius 1: member of the rho = 2 class. The truncated
        // series is I + lambda T with eigenvalues 1 +- |lambda|.
        let rep = crho_positivity(&jordan2(), &RhoSeq::constant(2.0).unwrap(), 0.999, 64, 8)
            .unwrap();
        assert_eq!(rep.verdict, PositivityVerdict::Pass);
        assert_eq!(rep.tail_bound, 0.0);
        assert!(rep.min_eig >= 1.0 - 0.999 - 1e-9);
    }

    #[test]
    fn nilpotent_fails_rho_one() {
        // Eigenvalues 1 +- 2|lambda| go negative past radius 1/2; a witness
        // near |lambda| = 0.6 confirms.
        let rep = crho_positivity(&jordan2(), &RhoSeq::constant(1.0).unwrap(), 0.999, 64, 8)
            .unwrap();
        assert_eq!(rep.verdict, PositivityVerdict::Fail);
        let f06 = {
            let lambda = Complex64::new(0.6, 0.0);
            let f = Operator::identity(2).add(&jordan2().scale(lambda).scale_re(2.0));
            f.hermitize().herm_eigen().unwrap().0[0]
        };
        assert!((f06 - (1.0 - 1.2)).abs() < 1e-12);
        assert!(rep.min_eig < -0.9); // attained near the rim
    }

    #[test]
    fn zero_operator_passes_any_rho() {
        let z = Operator::zeros(3, 3);
        for rho in [RhoSeq::constant(0.5).unwrap(), RhoSeq::constant(3.0).unwrap()] {
            let rep = crho_positivity(&z, &rho, 0.9, 32, 4).unwrap();
            assert_eq!(rep.verdict, PositivityVerdict::Pass);
            assert!((rep.min_eig - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uncontrolled_tail_is_inconclusive() {
        // ||T|| = 2 with rho = 1 and no nilpotency: r ||T|| / rho > 1.
        let t = Operator::diag_re(&[2.0, 0.5]);
        let rep = crho_positivity(&t, &RhoSeq::constant(1.0).unwrap(), 0.9, 32, 6).unwrap();
        assert_eq!(rep.verdict, PositivityVerdict::Inconclusive);
        assert!(rep.tail_bound.is_infinite());
    }

    #[test]
    fn contraction_passes_rho_one_via_dilation_consistency() {
        for seed in 0..5 {
            let mut rng = instances::stream_rng(seed, "crho-contraction");
            let g = instances::ginibre(&mut rng, 3, 3);
            let t = g.scale_re(0.95 / g.op_norm());
            let rep =
                crho_positivity(&t, &RhoSeq::constant(1.0).unwrap(), 0.9, 48, 40).unwrap();
            assert_eq!(rep.verdict, PositivityVerdict::Pass, "seed {seed}");
        }
    }

    #[test]
    fn expansive_nilpotent_fails_rho_one() {
        // Rank-one nilpotent of norm 1.1: the Hermitian part of I + 2 lambda T
        // has eigenvalue 1 - 1.1 |lambda|... scaled by 2/rho; it dips below 0
        // past |lambda| = 1/1.1, inside the scanned radius 0.999.
        use rand::Rng;
        for seed in 0..5 {
            let mut rng = instances::stream_rng(seed, "crho-expansive");
            let w = Complex64::from_polar(1.1, rng.gen::<f64>() * std::f64::consts::TAU);
            let mut t = Operator::zeros(2, 2);
            t[(0, 1)] = w;
            let rep =
                crho_positivity(&t, &RhoSeq::constant(1.0).unwrap(), 0.999, 48, 6).unwrap();
            assert_eq!(rep.verdict, PositivityVerdict::Fail, "seed {seed}");
        }
    }

    #[test]
    fn dilation_check_on_power_dilation_data() {
        for seed in 0..5 {
            let mut rng = instances::stream_rng(seed, "rho-dilation");
            let g = instances::ginibre(&mut rng, 3, 3);
            let t = g.scale_re(0.9 / g.op_norm());
            let (u, v) = schaeffer_dilation(&t, 8).unwrap();
            let defect =
                rho_dilation_check(&t, &u, &v, &RhoSeq::constant(1.0).unwrap(), 8).unwrap();
            assert!(defect <= 1e-10, "seed {seed}: defect {defect}");
        }
    }

    #[test]
    fn dilation_check_scaled_compression_family() {
        // T := 2 V* U V satisfies the rho = 2 relation at n = 1 by
        // construction; powers need the full dilation so test n_max = 1.
        let mut rng = instances::stream_rng(9, "rho2-family");
        let u = instances::haar_unitary(&mut rng, 6);
        let mut v = Operator::zeros(6, 2);
        v[(0, 0)] = Complex64::new(1.0, 0.0);
        v[(1, 1)] = Complex64::new(1.0, 0.0);
        let t = u.block(0, 0, 2, 2).scale_re(2.0);
        let defect = rho_dilation_check(&t, &u, &v, &RhoSeq::constant(2.0).unwrap(), 1).unwrap();
        assert!(defect <= 1e-10);
    }

    #[test]
    fn dilation_check_rejects_bad_premises() {
        let t = Operator::diag_re(&[0.5]);
        let not_unitary = Operator::diag_re(&[0.5, 1.0]);
        let v = Operator::from_real_rows(&[&[1.0], &[0.0]]);
        assert!(matches!(
            rho_dilation_check(&t, &not_unitary, &v, &RhoSeq::constant(1.0).unwrap(), 2),
            Err(Error::NotUnitary { .. })
        ));
        let u = Operator::identity(2);
        let not_iso = Operator::from_real_rows(&[&[0.5], &[0.0]]);
        assert!(matches!(
            rho_dilation_check(&t, &u, &not_iso, &RhoSeq::constant(1.0).unwrap(), 2),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn racz_constant_sequence_is_zero() {
        let rho = RhoSeq::constant(1.5).unwrap();
        let rep = racz_deficiency(&rho, 3, 1.5, 1000).unwrap();
        assert_eq!(rep.partial, 0.0);
        assert!(rep.converged);
        assert_eq!(rep.tail_estimate, Some(0.0));
    }

    #[test]
    fn racz_p_series_reaches_basel_value() {
        // rho_n = M + 1/n: partial sums of 1/n^2 plus the midpoint integral
        // tail land within 1e-6 of pi^2/6.
        let n_terms = 1_000_000usize;
        let table: Vec<f64> = (1..=n_terms).map(|n| 2.0 + 1.0 / n as f64).collect();
        let rho = RhoSeq::table(&table).unwrap();
        let rep = racz_deficiency(&rho, 1, 2.0, n_terms).unwrap();
        assert!(rep.converged);
        let estimate = rep.partial + 1.0 / (n_terms as f64 + 0.5);
        let basel = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((estimate - basel).abs() < 1e-6, "estimate {estimate}");
    }

    #[test]
    fn racz_sqrt_deviation_diverges() {
        let n_terms = 100_000usize;
        let table: Vec<f64> = (1..=n_terms)
            .map(|n| 2.0 + 1.0 / (n as f64).sqrt())
            .collect();
        let rho = RhoSeq::table(&table).unwrap();
        let rep = racz_deficiency(&rho, 1, 2.0, n_terms).unwrap();
        assert!(!rep.converged);
    }
}
