//! Largest singular value by Lanczos iteration on `A*A`.
//!
//! Used above the dense-SVD size limit and for matrix-free block operators.
//! Full reorthogonalization keeps the Krylov basis usable to machine
//! precision; the start vector is seeded, so results are deterministic.

use num_complex::Complex64;

use super::{dot, vec_norm, Operator};

/// A linear map exposed through matrix-vector products only.
pub trait LinearMap {
    fn domain_dim(&self) -> usize;
    fn range_dim(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;
}

impl LinearMap for Operator {
    fn domain_dim(&self) -> usize {
        self.cols()
    }
    fn range_dim(&self) -> usize {
        self.rows()
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matvec(x)
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        self.adjoint_matvec(y)
    }
}

pub(crate) fn top_singular_value_dense(a: &Operator) -> f64 {
    top_singular_value(a, 1e-12, 600)
}

/// Largest singular value of a [`LinearMap`] to relative tolerance `tol`.
pub fn top_singular_value<M: LinearMap + ?Sized>(map: &M, tol: f64, max_iter: usize) -> f64 {
    let n = map.domain_dim();
    if n == 0 || map.range_dim() == 0 {
        return 0.0;
    }
    // Fixed pseudo-random start: decorrelated from any structured kernel.
    let mut rng = crate::instances::stream_rng(0x51ac_705e, "lanczos-start");
    let mut q = crate::instances::random_unit_vector(&mut rng, n);

    let gram_apply = |x: &[Complex64]| -> Vec<Complex64> { map.apply_adjoint(&map.apply(x)) };

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut best = 0.0f64;
    let mut plateau = 0usize;

    for it in 0..max_iter {
        let mut w = gram_apply(&q);
        let alpha = dot(&q, &w).re;
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= qi * Complex64::new(alpha, 0.0);
        }
        if let Some(prev) = basis.last() {
            let beta_prev = *betas.last().unwrap();
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= pi * Complex64::new(beta_prev, 0.0);
            }
        }
        basis.push(q.clone());
        alphas.push(alpha);
        // Full reorthogonalization (twice for safety).
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let beta = vec_norm(&w);
        let theta = tridiag_top_eig(&alphas, &betas);
        // The top Ritz value is monotone under extension; once it stops
        // moving at relative tolerance for several steps it has converged
        // (for the PSD Gram operator the Kaniel-Paige bound decays
        // geometrically past the spectral gap).
        if theta > best && theta - best > tol * theta.max(1e-300) {
            plateau = 0;
        } else {
            plateau += 1;
        }
        best = best.max(theta);
        if beta <= tol * theta.max(1e-300) || beta < 1e-300 || plateau >= 6 {
            break;
        }
        if it + 1 == max_iter {
            break;
        }
        betas.push(beta);
        for wi in w.iter_mut() {
            *wi /= Complex64::new(beta, 0.0);
        }
        q = w;
    }
    best.max(0.0).sqrt()
}

/// Largest eigenvalue of the symmetric tridiagonal (alphas on the diagonal,
/// betas off-diagonal) by bisection on the Sturm sequence.
fn tridiag_top_eig(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    if k == 0 {
        return 0.0;
    }
    if k == 1 {
        return alphas[0];
    }
    let radius: f64 = (0..k)
        .map(|i| {
            let b_lo = if i > 0 { betas[i - 1].abs() } else { 0.0 };
            let b_hi = if i < k - 1 { betas[i].abs() } else { 0.0 };
            alphas[i].abs() + b_lo + b_hi
        })
        .fold(0.0, f64::max);
    let mut lo = -radius;
    let mut hi = radius.max(1e-300);
    // Count of eigenvalues below x via the Sturm sequence.
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut d = 1.0f64;
        for i in 0..k {
            let b2 = if i > 0 { betas[i - 1] * betas[i - 1] } else { 0.0 };
            d = alphas[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * radius.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_svd_on_random_matrices() {
        let mut rng = crate::instances::stream_rng(12, "lanczos-vs-svd");
        for trial in 0..10 {
            let n = 8 + 7 * trial;
            let a = crate::instances::ginibre(&mut rng, n, n);
            let svd = a.op_norm_svd();
            let lz = top_singular_value(&a, 1e-13, 400);
            assert!(
                (svd - lz).abs() <= 1e-10 * svd.max(1.0),
                "trial {}: svd {} lanczos {}",
                trial,
                svd,
                lz
            );
        }
    }

    #[test]
    fn zero_map_reports_zero() {
        let a = Operator::zeros(50, 50);
        assert_eq!(top_singular_value(&a, 1e-12, 100), 0.0);
    }

    #[test]
    fn two_point_spectrum_converges_fast() {
        // Rank-one plus nilpotent: spectrum of A*A is {4, 0}.
        let a = Operator::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((top_singular_value(&a, 1e-13, 50) - 2.0).abs() < 1e-11);
    }
}
