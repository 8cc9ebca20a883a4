//! Weighted quadratic nearness between operators.
//!
//! For a strictly positive weight beta, the nearness of T1 and T2 is
//! `s = [sup_N || sum_{n<=N} (T1^n - T2^n)(T1^n - T2^n)* / beta(n)^2 ||]^{1/2}`.
//! The partial sums are PSD-ordered, so the partial values are nondecreasing;
//! the term-norm sum `u^2 = sum ||T1^n - T2^n||^2 / beta(n)^2` dominates s.
//! The factored variant replaces `T2^n` by `V1 C^n V2` (with the n = 0 term
//! read as `I - V1 V2`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::sequences::BetaWeight;

/// Outcome of a truncated nearness computation.
#[derive(Debug, Clone, Serialize)]
pub struct NearnessReport {
    /// `||A_N||^{1/2}` for N = 0..=n_used; nondecreasing.
    pub s_partial: Vec<f64>,
    /// Final truncated nearness value.
    pub s: f64,
    /// Term-norm sum root (the summable upper form).
    pub u: f64,
    /// Analytic tail estimate beyond the truncation, when the spectral radii
    /// permit a geometric envelope.
    pub tail_bound: Option<f64>,
    pub n_used: usize,
}

/// Difference supplier: n -> T1^n - (comparison)^n.
struct DiffAccumulator<'a> {
    t1_pow: Operator,
    t1: &'a Operator,
    other: OtherPowers<'a>,
}

enum OtherPowers<'a> {
    Plain { pow: Operator, op: &'a Operator },
    Factored { c_pow: Operator, v1: &'a Operator, c: &'a Operator, v2: &'a Operator },
}

impl<'a> DiffAccumulator<'a> {
    fn plain(t1: &'a Operator, t2: &'a Operator) -> Self {
        DiffAccumulator {
            t1_pow: Operator::identity(t1.rows()),
            t1,
            other: OtherPowers::Plain {
                pow: Operator::identity(t2.rows()),
                op: t2,
            },
        }
    }

    fn factored(t1: &'a Operator, v1: &'a Operator, c: &'a Operator, v2: &'a Operator) -> Self {
        DiffAccumulator {
            t1_pow: Operator::identity(t1.rows()),
            t1,
            other: OtherPowers::Factored {
                c_pow: Operator::identity(c.rows()),
                v1,
                c,
                v2,
            },
        }
    }

    /// Difference at the current power, then advance.
    fn next_diff(&mut self) -> Operator {
        let diff = match &self.other {
            OtherPowers::Plain { pow, .. } => self.t1_pow.sub(pow),
            OtherPowers::Factored { c_pow, v1, v2, .. } => {
                let approx = v1.mul(c_pow).mul(v2);
                self.t1_pow.sub(&approx)
            }
        };
        self.t1_pow = self.t1_pow.mul(self.t1);
        match &mut self.other {
            OtherPowers::Plain { pow, op } => *pow = pow.mul(op),
            OtherPowers::Factored { c_pow, c, .. } => *c_pow = c_pow.mul(c),
        }
        diff
    }
}

fn run_nearness(
    mut acc: DiffAccumulator<'_>,
    dim: usize,
    beta: &BetaWeight,
    n_max: usize,
    radii: Option<(f64, f64)>,
) -> Result<NearnessReport> {
    let mut a_n = Operator::zeros(dim, dim);
    let mut s_partial = Vec::with_capacity(n_max + 1);
    let mut u_sq = 0.0f64;
    let mut envelope_c: f64 = 0.0;
    let rho = radii.map(|(r1, r2)| r1.max(r2) + 1e-6);
    for n in 0..=n_max {
        let b = beta.beta(n)?;
        let diff = acc.next_diff();
        let term_norm = diff.op_norm();
        u_sq += term_norm * term_norm / (b * b);
        a_n.axpy(
            num_complex::Complex64::new(1.0 / (b * b), 0.0),
            &diff.mul_adjoint(&diff),
        );
        let a_herm = a_n.hermitize();
        let norm = a_herm.op_norm();
        s_partial.push(norm.sqrt());
        if let Some(rho) = rho {
            if n > 0 && rho < 1.0 {
                envelope_c = envelope_c.max(term_norm / rho.powi(n as i32));
            }
        }
    }
    // Monotonicity is structural (PSD increments); enforce against roundoff.
    for i in 1..s_partial.len() {
        if s_partial[i] < s_partial[i - 1] {
            s_partial[i] = s_partial[i - 1];
        }
    }
    let s = *s_partial.last().unwrap();
    // Geometric envelope tail: sum_{n > N} (c rho^n)^2 / beta(n)^2, with the
    // weight bounded below by its value at N+1 for the monotone rules.
    let tail_bound = match (rho, radii) {
        (Some(rho), Some(_)) if rho < 1.0 && envelope_c > 0.0 => {
            let beta_floor = match beta {
                BetaWeight::Const(c) => Some(*c),
                BetaWeight::Sqrt => Some(((n_max + 2) as f64).sqrt()),
                BetaWeight::Table(_) => None,
            };
            beta_floor.map(|bf| {
                let q = rho * rho;
                (envelope_c * envelope_c * q.powi(n_max as i32 + 1) / (1.0 - q)).sqrt() / bf
            })
        }
        _ => None,
    };
    Ok(NearnessReport {
        s_partial,
        s,
        u: u_sq.sqrt(),
        tail_bound,
        n_used: n_max,
    })
}

/// Truncated `beta`-quadratic nearness of two operators on the same space.
pub fn quadratic_nearness(
    t1: &Operator,
    t2: &Operator,
    beta: &BetaWeight,
    n_max: usize,
) -> Result<NearnessReport> {
    if (t1.rows(), t1.cols()) != (t2.rows(), t2.cols()) || !t1.is_square() {
        return Err(Error::DimensionMismatch {
            context: "nearness operands",
            left: format!("{}x{}", t1.rows(), t1.cols()),
            right: format!("{}x{}", t2.rows(), t2.cols()),
        });
    }
    let radii = match (t1.spectral_radius(), t2.spectral_radius()) {
        (Ok(r1), Ok(r2)) => Some((r1, r2)),
        _ => None,
    };
    run_nearness(
        DiffAccumulator::plain(t1, t2),
        t1.rows(),
        beta,
        n_max.max(1),
        radii,
    )
}

/// Truncated nearness of T to the factored powers `V1 C^n V2`.
///
/// Dimensions: `V2 : H -> K`, `C : K -> K`, `V1 : K -> H`. The n = 0 term
/// compares the identity with `V1 V2`.
pub fn factored_nearness(
    t: &Operator,
    v1: &Operator,
    c: &Operator,
    v2: &Operator,
    beta: &BetaWeight,
    n_max: usize,
) -> Result<NearnessReport> {
    let n = t.rows();
    let k = c.rows();
    if !t.is_square() || !c.is_square() || v1.rows() != n || v1.cols() != k || v2.rows() != k
        || v2.cols() != n
    {
        return Err(Error::DimensionMismatch {
            context: "factored nearness operands",
            left: format!("T {}x{}, V1 {}x{}", t.rows(), t.cols(), v1.rows(), v1.cols()),
            right: format!("C {}x{}, V2 {}x{}", c.rows(), c.cols(), v2.rows(), v2.cols()),
        });
    }
    let radii = match (t.spectral_radius(), c.spectral_radius()) {
        (Ok(r1), Ok(r2)) => Some((r1, r2)),
        _ => None,
    };
    run_nearness(
        DiffAccumulator::factored(t, v1, c, v2),
        n,
        beta,
        n_max.max(1),
        radii,
    )
}

/// Row form of the nearness bound: the worst sampled value of
/// `sum_{n<=N} ||(T1^n - T2^n)* y||^2 / beta(n)^2` over unit vectors y.
///
/// Sampled directions include iterates of the accumulated PSD sum applied to
/// the raw samples, so the maximum approaches the top eigenvalue as the
/// sample count grows while remaining a genuine evaluation at unit vectors.
pub fn row_form_check(
    t1: &Operator,
    t2: &Operator,
    beta: &BetaWeight,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if (t1.rows(), t1.cols()) != (t2.rows(), t2.cols()) || !t1.is_square() {
        return Err(Error::DimensionMismatch {
            context: "row form operands",
            left: format!("{}x{}", t1.rows(), t1.cols()),
            right: format!("{}x{}", t2.rows(), t2.cols()),
        });
    }
    let dim = t1.rows();
    // Precompute the adjoint differences once.
    let mut diffs = Vec::with_capacity(n_max + 1);
    let mut acc = DiffAccumulator::plain(t1, t2);
    let mut a_n = Operator::zeros(dim, dim);
    for n in 0..=n_max {
        let b = beta.beta(n)?;
        let d = acc.next_diff();
        a_n.axpy(
            num_complex::Complex64::new(1.0 / (b * b), 0.0),
            &d.mul_adjoint(&d),
        );
        diffs.push((d.adjoint(), b));
    }
    let ratio_at = |y: &[num_complex::Complex64]| -> f64 {
        let ny = crate::linalg::vec_norm(y);
        if ny < 1e-300 {
            return 0.0;
        }
        let mut total = 0.0;
        for (dstar, b) in &diffs {
            let v = dstar.matvec(y);
            let nv = crate::linalg::vec_norm(&v);
            total += nv * nv / (b * b);
        }
        total / (ny * ny)
    };
    let mut rng = crate::instances::stream_rng(seed, "row-form-samples");
    let mut best = 0.0f64;
    for _ in 0..samples.max(1) {
        let y = crate::instances::random_unit_vector(&mut rng, dim);
        best = best.max(ratio_at(&y));
        // Push the sample toward the top eigenspace of the PSD sum.
        let mut z = y;
        for _ in 0..2 {
            z = a_n.matvec(&z);
            let nz = crate::linalg::vec_norm(&z);
            if nz < 1e-300 {
                break;
            }
            for zi in z.iter_mut() {
                *zi /= num_complex::Complex64::new(nz, 0.0);
            }
            best = best.max(ratio_at(&z));
        }
    }
    Ok(best)
}

/// The power-difference norm sequence `||T1^n - T2^n||` for n = 1..=n_max,
/// with a last-quarter maximum as the decay diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub norms: Vec<f64>,
    /// max of the final quarter of the sequence
    pub last_quarter_max: f64,
}

pub fn asymptotic_nearness(t1: &Operator, t2: &Operator, n_max: usize) -> Result<AsymptoticReport> {
    if (t1.rows(), t1.cols()) != (t2.rows(), t2.cols()) || !t1.is_square() {
        return Err(Error::DimensionMismatch {
            context: "asymptotic nearness operands",
            left: format!("{}x{}", t1.rows(), t1.cols()),
            right: format!("{}x{}", t2.rows(), t2.cols()),
        });
    }
    let mut acc = DiffAccumulator::plain(t1, t2);
    acc.next_diff(); // discard n = 0
    let norms: Vec<f64> = (1..=n_max.max(1)).map(|_| acc.next_diff().op_norm()).collect();
    let q = norms.len() - norms.len() / 4;
    let last_quarter_max = norms[q.saturating_sub(1)..]
        .iter()
        .copied()
        .fold(0.0, f64::max);
    Ok(AsymptoticReport {
        norms,
        last_quarter_max,
    })
}

/// Sandwich bounds for powers near an isometry.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SandwichReport {
    /// Whether `max_m ||T^m - W^m|| <= r` held.
    pub premise_ok: bool,
    /// min over samples and powers of `||T^m x|| - (1-r)||x||`.
    pub worst_lower: f64,
    /// min over samples and powers of `(1+r)||x|| - ||T^m x||`.
    pub worst_upper: f64,
}

/// Check `(1-r)||x|| <= ||T^m x|| <= (1+r)||x||` for all m <= m_max given
/// that every power of T stays within r of the matching power of the
/// isometry W.
pub fn sandwich_check(
    t: &Operator,
    w: &Operator,
    r: f64,
    m_max: usize,
    samples: usize,
    seed: u64,
) -> Result<SandwichReport> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::InvalidParam(format!("need 0 < r < 1, got {r}")));
    }
    let iso_defect = w
        .adjoint_mul(w)
        .sub(&Operator::identity(w.cols()))
        .op_norm();
    if iso_defect > 1e-10 {
        return Err(Error::NotIsometry { defect: iso_defect });
    }
    let mut premise_ok = true;
    let mut t_pow = Operator::identity(t.rows());
    let mut w_pow = Operator::identity(w.rows());
    let mut t_powers = Vec::with_capacity(m_max);
    for _ in 1..=m_max.max(1) {
        t_pow = t_pow.mul(t);
        w_pow = w_pow.mul(w);
        if t_pow.sub(&w_pow).op_norm() > r {
            premise_ok = false;
        }
        t_powers.push(t_pow.clone());
    }
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    let mut rng = crate::instances::stream_rng(seed, "sandwich-samples");
    for _ in 0..samples.max(1) {
        let x = crate::instances::random_unit_vector(&mut rng, t.cols());
        for tp in &t_powers {
            let nx = crate::linalg::vec_norm(&tp.matvec(&x));
            worst_lower = worst_lower.min(nx - (1.0 - r));
            worst_upper = worst_upper.min((1.0 + r) - nx);
        }
    }
    Ok(SandwichReport {
        premise_ok,
        worst_lower,
        worst_upper,
    })
}

/// Finite Cesaro average `(1/M) sum_{m<M} T*^m T^m`.
///
/// Diagnostic companion to [`sandwich_check`]: when the sandwich premise
/// holds, the average is uniformly bounded above and below, so its square
/// root renorms T toward an isometry. No convergence claim is made at
/// finite M.
pub fn cesaro_power_gram(t: &Operator, m_terms: usize) -> Result<Operator> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let mut acc = Operator::zeros(t.rows(), t.rows());
    let mut pow = Operator::identity(t.rows());
    for _ in 0..m_terms.max(1) {
        acc.axpy(num_complex::Complex64::new(1.0, 0.0), &pow.adjoint_mul(&pow));
        pow = pow.mul(t);
    }
    Ok(acc.scale_re(1.0 / m_terms.max(1) as f64).hermitize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use num_complex::Complex64;

    #[test]
    fn identical_operators_have_zero_nearness() {
        let mut rng = instances::stream_rng(1, "nearness-equal");
        let t = instances::ginibre(&mut rng, 4, 4);
        let rep = quadratic_nearness(&t, &t, &BetaWeight::one(), 12).unwrap();
        assert_eq!(rep.s, 0.0);
        assert_eq!(rep.u, 0.0);
    }

    #[test]
    fn nilpotent_vs_zero_single_term() {
        // Only the n = 1 term survives: s = |t|.
        let t = Operator::from_real_rows(&[&[0.0, 0.7], &[0.0, 0.0]]);
        let z = Operator::zeros(2, 2);
        let rep = quadratic_nearness(&t, &z, &BetaWeight::one(), 8).unwrap();
        assert!((rep.s - 0.7).abs() < 1e-12);
    }

    #[test]
    fn scalar_diagonal_geometric_sums() {
        // diag(a) vs diag(b): s^2 = max_i sum_{n>=1} (a_i^n - b_i^n)^2.
        let a = Operator::diag_re(&[0.9, 0.3]);
        let b = Operator::diag_re(&[0.8, 0.1]);
        let n_max = 400;
        let rep = quadratic_nearness(&a, &b, &BetaWeight::one(), n_max).unwrap();
        let mut expect: f64 = 0.0;
        for (x, y) in [(0.9f64, 0.8f64), (0.3, 0.1)] {
            let mut sum = 0.0;
            for n in 1..=n_max {
                let d = x.powi(n as i32) - y.powi(n as i32);
                sum += d * d;
            }
            expect = expect.max(sum);
        }
        assert!((rep.s * rep.s - expect).abs() < 1e-10);
        assert!(rep.tail_bound.unwrap() < 1e-8);
    }

    #[test]
    fn partial_values_nondecreasing_and_below_u() {
        for seed in 0..10 {
            let t1 = instances::gen_instance("ginibre", 5, 0.85, seed).unwrap();
            let t2 = instances::gen_instance("ginibre", 5, 0.8, seed + 100).unwrap();
            let rep = quadratic_nearness(&t1, &t2, &BetaWeight::one(), 30).unwrap();
            for w in rep.s_partial.windows(2) {
                assert!(w[1] >= w[0] - 1e-12);
            }
            assert!(rep.s <= rep.u + 1e-10, "s {} vs u {}", rep.s, rep.u);
        }
    }

    #[test]
    fn contractive_spectrum_near_zero_with_tail() {
        // Spectral radius below one puts the operator quadratically near 0.
        for seed in 0..50 {
            let t = instances::gen_instance("ginibre", 6, 0.9, seed).unwrap();
            let z = Operator::zeros(6, 6);
            let rep = quadratic_nearness(&t, &z, &BetaWeight::one(), 150).unwrap();
            assert!(rep.s.is_finite());
            let tail = rep.tail_bound.expect("tail should be available");
            assert!(tail < 1e-6, "seed {seed}: tail {tail}");
        }
    }

    #[test]
    fn factored_trivial_and_zero_modes() {
        let mut rng = instances::stream_rng(2, "factored");
        let t = instances::ginibre(&mut rng, 4, 4).scale_re(0.2);
        let id = Operator::identity(4);
        let rep = factored_nearness(&t, &id, &t, &id, &BetaWeight::one(), 10).unwrap();
        assert!(rep.s < 1e-14);

        // C = 0: the n = 0 term contributes ||I - V1 V2|| and the rest are
        // the powers of T.
        let v1 = instances::ginibre(&mut rng, 4, 3);
        let v2 = instances::ginibre(&mut rng, 3, 4);
        let c = Operator::zeros(3, 3);
        let rep = factored_nearness(&t, &v1, &c, &v2, &BetaWeight::one(), 40).unwrap();
        let oracle = {
            let mut a = Operator::zeros(4, 4);
            let d0 = Operator::identity(4).sub(&v1.mul(&v2));
            a.axpy(Complex64::new(1.0, 0.0), &d0.mul_adjoint(&d0));
            let mut pow = t.clone();
            for _ in 1..=40 {
                a.axpy(Complex64::new(1.0, 0.0), &pow.mul_adjoint(&pow));
                pow = pow.mul(&t);
            }
            a.hermitize().op_norm().sqrt()
        };
        assert!((rep.s - oracle).abs() < 1e-10);
    }

    #[test]
    fn row_form_trivial_cases() {
        let t = Operator::diag_re(&[0.5]);
        let z = Operator::zeros(1, 1);
        let rep = quadratic_nearness(&t, &z, &BetaWeight::one(), 60).unwrap();
        let row = row_form_check(&t, &z, &BetaWeight::one(), 60, 5, 3).unwrap();
        // Scalars: every sample attains s^2 exactly.
        assert!((row - rep.s * rep.s).abs() < 1e-12);

        let row0 = row_form_check(&t, &t, &BetaWeight::one(), 10, 5, 3).unwrap();
        assert_eq!(row0, 0.0);
    }

    #[test]
    fn row_form_approaches_top_eigenvalue() {
        for seed in 0..5 {
            let t1 = instances::gen_instance("ginibre", 4, 0.8, seed).unwrap();
            let t2 = instances::gen_instance("ginibre", 4, 0.75, seed + 50).unwrap();
            let rep = quadratic_nearness(&t1, &t2, &BetaWeight::one(), 25).unwrap();
            let s_sq = rep.s * rep.s;
            let row = row_form_check(&t1, &t2, &BetaWeight::one(), 25, 200, seed).unwrap();
            assert!(row <= s_sq + 1e-10, "row {row} above s^2 {s_sq}");
            assert!(row >= 0.9 * s_sq, "row {row} below 0.9 s^2 {s_sq}");
        }
    }

    #[test]
    fn asymptotic_norms_match_scalar_formula() {
        let a = Operator::diag_re(&[0.9]);
        let b = Operator::diag_re(&[0.8]);
        let rep = asymptotic_nearness(&a, &b, 40).unwrap();
        for (n, v) in rep.norms.iter().enumerate() {
            let expect = 0.9f64.powi(n as i32 + 1) - 0.8f64.powi(n as i32 + 1);
            assert!((v - expect).abs() < 1e-12);
        }
        assert!(rep.last_quarter_max < rep.norms[0]);

        let z = Operator::zeros(3, 3);
        let nil = instances::nilpotent_upper(&mut instances::stream_rng(3, "nil"), 3);
        let rep = asymptotic_nearness(&nil, &z, 8).unwrap();
        assert_eq!(rep.norms[4], 0.0);
    }

    #[test]
    fn sandwich_on_perturbed_unitary() {
        let mut rng = instances::stream_rng(6, "sandwich");
        let u = instances::haar_unitary(&mut rng, 4);
        let r = 0.3;
        let m_max = 6usize;
        // Commuting phase perturbation scaled to the power window:
        // ||T^m - W^m|| = max_k |e^{i m d_k} - 1| <= m max|d_k| <= r/2.
        let base: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, 0.3 + 0.4 * k as f64))
            .collect();
        let delta = 0.5 * r / m_max as f64;
        let perturbed: Vec<Complex64> = base
            .iter()
            .enumerate()
            .map(|(k, z)| z * Complex64::from_polar(1.0, delta * (k as f64 + 1.0) / 4.0))
            .collect();
        let w = u.mul(&Operator::diag(&base)).mul_adjoint(&u);
        let t = u.mul(&Operator::diag(&perturbed)).mul_adjoint(&u);
        let rep = sandwich_check(&t, &w, r, m_max, 50, 1).unwrap();
        assert!(rep.premise_ok);
        assert!(rep.worst_lower >= -1e-10);
        assert!(rep.worst_upper >= -1e-10);

        // T = W: margins are r on both sides.
        let rep = sandwich_check(&w, &w, r, 5, 20, 2).unwrap();
        assert!(rep.premise_ok);
        assert!((rep.worst_lower - r).abs() < 1e-9);
        assert!((rep.worst_upper - r).abs() < 1e-9);
    }

    #[test]
    fn sandwich_premise_fails_for_expansion() {
        let w = Operator::identity(3);
        let t = w.scale_re(1.05);
        let rep = sandwich_check(&t, &w, 0.2, 24, 10, 5).unwrap();
        // (1.05)^m - 1 exceeds 0.2 for m >= 4.
        assert!(!rep.premise_ok);
    }

    #[test]
    fn sandwich_rejects_non_isometry() {
        let w = Operator::diag_re(&[0.5, 1.0]);
        assert!(matches!(
            sandwich_check(&w, &w, 0.5, 3, 5, 0),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn cesaro_gram_of_isometry_is_identity() {
        let mut rng = instances::stream_rng(11, "cesaro");
        let u = instances::haar_unitary(&mut rng, 4);
        let g = cesaro_power_gram(&u, 16).unwrap();
        assert!(g.sub(&Operator::identity(4)).op_norm() < 1e-12);
    }
}
