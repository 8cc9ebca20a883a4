//! Anticommuting generator systems and the block Hankel operators built
//! from them.
//!
//! Generators follow the Jordan-Wigner layout
//! `C_n = Z^(x)n (x) A (x) I^(x)(m-n-1)` with `A = [[0,1],[0,0]]` and
//! `Z = diag(1,-1)`, acting on 2^m dimensions. Each generator moves every
//! basis vector to at most one other basis vector with sign +-1, so products
//! and anticommutators are evaluated exactly through that structure; dense
//! matrices are materialized on demand.
//!
//! The Hankel operator of a sequence is the N x N block matrix with block
//! (i,j) equal to `a_{i+j} C_{i+j}`, and the associated block operator
//! `[[S*, Y], [0, S]]` (shift multiplicity 2^m) carries the power-difference
//! functional: the (1,2) corner of the n-th power difference is
//! `sum_{k<n} S*^k Y S^{n-1-k}`, a block Hankel matrix again, whose norm is
//! computed matrix-free.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{top_singular_value, LinearMap, Operator};
use crate::sequences::AlphaSeq;
use crate::shifts::shift_matrix;

/// Largest fiber count times 2^modes for which dense Hankel blocks are kept.
const DENSE_HANKEL_LIMIT: usize = 5200;
/// Largest dimension for which the full block operator is materialized.
const DENSE_FOGUEL_LIMIT: usize = 4096;

/// Jordan-Wigner generator system on 2^modes dimensions.
#[derive(Debug, Clone)]
pub struct CarSystem {
    modes: usize,
}

/// Build the generator system; the dimension cap keeps dense norms tractable.
pub fn car_generators(modes: usize) -> Result<CarSystem> {
    if modes == 0 || modes > 12 {
        return Err(Error::ModesOutOfRange(modes));
    }
    Ok(CarSystem { modes })
}

impl CarSystem {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    /// Bit that generator n toggles (factor 0 is the most significant bit).
    fn bit(&self, n: usize) -> usize {
        1 << (self.modes - 1 - n)
    }

    /// Apply C_n to basis vector x: the annihilation direction.
    ///
    /// Returns (target index, sign) when the factor-n bit of x is set.
    fn step_lower(&self, n: usize, x: usize) -> Option<(usize, f64)> {
        let bit = self.bit(n);
        if x & bit == 0 {
            return None;
        }
        let prefix = x >> (self.modes - n); // bits of factors 0..n-1
        let sign = if (prefix.count_ones() & 1) == 0 {
            1.0
        } else {
            -1.0
        };
        Some((x & !bit, sign))
    }

    /// Apply C_n* to basis vector x: the creation direction.
    fn step_raise(&self, n: usize, x: usize) -> Option<(usize, f64)> {
        let bit = self.bit(n);
        if x & bit != 0 {
            return None;
        }
        let prefix = x >> (self.modes - n);
        let sign = if (prefix.count_ones() & 1) == 0 {
            1.0
        } else {
            -1.0
        };
        Some((x | bit, sign))
    }

    /// Dense matrix of generator n.
    pub fn generator(&self, n: usize) -> Result<Operator> {
        if n >= self.modes {
            return Err(Error::InsufficientModes {
                needed: n + 1,
                got: self.modes,
            });
        }
        let dim = self.dim();
        let mut m = Operator::zeros(dim, dim);
        for x in 0..dim {
            if let Some((y, s)) = self.step_lower(n, x) {
                m[(y, x)] = Complex64::new(s, 0.0);
            }
        }
        Ok(m)
    }

    /// All generators, dense.
    pub fn generators(&self) -> Result<Vec<Operator>> {
        (0..self.modes).map(|n| self.generator(n)).collect()
    }

    /// `out += coef * C_n * x` using the one-entry-per-column structure.
    pub fn accumulate_apply(
        &self,
        n: usize,
        coef: Complex64,
        x: &[Complex64],
        out: &mut [Complex64],
    ) {
        for (src, &v) in x.iter().enumerate() {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            if let Some((dst, s)) = self.step_lower(n, src) {
                out[dst] += coef * v * s;
            }
        }
    }

    /// `out += coef * C_n* * x`.
    pub fn accumulate_apply_adjoint(
        &self,
        n: usize,
        coef: Complex64,
        x: &[Complex64],
        out: &mut [Complex64],
    ) {
        for (src, &v) in x.iter().enumerate() {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            if let Some((dst, s)) = self.step_raise(n, src) {
                out[dst] += coef * v * s;
            }
        }
    }

    /// Worst anticommutation defects over all generator pairs:
    /// (max ||C_i C_j + C_j C_i||, max ||C_i C_j* + C_j* C_i - delta I||).
    ///
    /// Evaluated exactly through the signed-permutation structure; the
    /// reported value bounds the operator norm by sqrt(norm_1 * norm_inf).
    pub fn anticommutation_defects(&self) -> (f64, f64) {
        let dim = self.dim();
        let mut worst_cc = 0.0f64;
        let mut worst_mixed = 0.0f64;
        // Sparse column accumulator reused across pairs.
        let mut col: Vec<f64> = vec![0.0; dim];
        for i in 0..self.modes {
            for j in 0..self.modes {
                let mut max_colsum_cc = 0.0f64;
                let mut max_colsum_mixed = 0.0f64;
                for x in 0..dim {
                    // C_i C_j + C_j C_i applied to e_x.
                    let mut touched = [0usize; 2];
                    let mut n_touched = 0;
                    let add = |col: &mut Vec<f64>,
                                   touched: &mut [usize; 2],
                                   n_touched: &mut usize,
                                   idx: usize,
                                   v: f64| {
                        if col[idx] == 0.0 && v != 0.0 {
                            touched[*n_touched] = idx;
                            *n_touched += 1;
                        }
                        col[idx] += v;
                    };
                    if let Some((y, s1)) = self.step_lower(j, x) {
                        if let Some((z, s2)) = self.step_lower(i, y) {
                            add(&mut col, &mut touched, &mut n_touched, z, s1 * s2);
                        }
                    }
                    if let Some((y, s1)) = self.step_lower(i, x) {
                        if let Some((z, s2)) = self.step_lower(j, y) {
                            add(&mut col, &mut touched, &mut n_touched, z, s1 * s2);
                        }
                    }
                    let colsum: f64 = touched[..n_touched].iter().map(|&t| col[t].abs()).sum();
                    max_colsum_cc = max_colsum_cc.max(colsum);
                    for &t in &touched[..n_touched] {
                        col[t] = 0.0;
                    }

                    // C_i C_j* + C_j* C_i - delta_{ij} I applied to e_x.
                    let mut n_touched = 0;
                    if let Some((y, s1)) = self.step_raise(j, x) {
                        if let Some((z, s2)) = self.step_lower(i, y) {
                            add(&mut col, &mut touched, &mut n_touched, z, s1 * s2);
                        }
                    }
                    if let Some((y, s1)) = self.step_lower(i, x) {
                        if let Some((z, s2)) = self.step_raise(j, y) {
                            add(&mut col, &mut touched, &mut n_touched, z, s1 * s2);
                        }
                    }
                    if i == j {
                        add(&mut col, &mut touched, &mut n_touched, x, -1.0);
                    }
                    let colsum: f64 = touched[..n_touched].iter().map(|&t| col[t].abs()).sum();
                    max_colsum_mixed = max_colsum_mixed.max(colsum);
                    for &t in &touched[..n_touched] {
                        col[t] = 0.0;
                    }
                }
                // Anticommutators are Hankel-symmetric in structure; the
                // column bound doubles as the row bound.
                worst_cc = worst_cc.max(max_colsum_cc);
                worst_mixed = worst_mixed.max(max_colsum_mixed);
            }
        }
        (worst_cc, worst_mixed)
    }
}

/// `sum_n u_n C_n`, dense. The result has norm equal to the 2-norm of u.
pub fn lambda_of(sys: &CarSystem, u: &[Complex64]) -> Result<Operator> {
    if u.len() > sys.modes() {
        return Err(Error::InsufficientModes {
            needed: u.len(),
            got: sys.modes(),
        });
    }
    let dim = sys.dim();
    let mut m = Operator::zeros(dim, dim);
    for x in 0..dim {
        let mut colv: Vec<(usize, Complex64)> = Vec::new();
        for (n, &c) in u.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            if let Some((y, s)) = sys.step_lower(n, x) {
                colv.push((y, c * s));
            }
        }
        for (y, v) in colv {
            m[(y, x)] += v;
        }
    }
    Ok(m)
}

/// Block Hankel operator with scalar weights riding on distinct generators:
/// block (i,j) is `coef(i+j) * C_{g(i+j)}`. Exposes matrix-free products.
#[derive(Debug, Clone)]
pub struct BlockHankelMap {
    sys: CarSystem,
    n_fibers: usize,
    /// (coefficient, generator index) per antidiagonal; zero-coef entries skipped.
    diagonals: Vec<(f64, usize)>,
}

impl BlockHankelMap {
    fn fiber_dim(&self) -> usize {
        self.sys.dim()
    }

    /// Dense materialization (tests and small instances).
    pub fn dense(&self) -> Operator {
        let fd = self.fiber_dim();
        let dim = self.n_fibers * fd;
        let mut m = Operator::zeros(dim, dim);
        for i in 0..self.n_fibers {
            for j in 0..self.n_fibers {
                let (coef, gen) = self.diagonals[i + j];
                if coef == 0.0 {
                    continue;
                }
                for x in 0..fd {
                    if let Some((y, s)) = self.sys.step_lower(gen, x) {
                        m[(i * fd + y, j * fd + x)] = Complex64::new(coef * s, 0.0);
                    }
                }
            }
        }
        m
    }
}

impl LinearMap for BlockHankelMap {
    fn domain_dim(&self) -> usize {
        self.n_fibers * self.fiber_dim()
    }
    fn range_dim(&self) -> usize {
        self.domain_dim()
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let fd = self.fiber_dim();
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for i in 0..self.n_fibers {
            for j in 0..self.n_fibers {
                let (coef, gen) = self.diagonals[i + j];
                if coef == 0.0 {
                    continue;
                }
                self.sys.accumulate_apply(
                    gen,
                    Complex64::new(coef, 0.0),
                    &x[j * fd..(j + 1) * fd],
                    &mut out[i * fd..(i + 1) * fd],
                );
            }
        }
        out
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let fd = self.fiber_dim();
        let mut out = vec![Complex64::new(0.0, 0.0); y.len()];
        for i in 0..self.n_fibers {
            for j in 0..self.n_fibers {
                let (coef, gen) = self.diagonals[i + j];
                if coef == 0.0 {
                    continue;
                }
                self.sys.accumulate_apply_adjoint(
                    gen,
                    Complex64::new(coef, 0.0),
                    &y[i * fd..(i + 1) * fd],
                    &mut out[j * fd..(j + 1) * fd],
                );
            }
        }
        out
    }
}

fn hankel_map(alpha: &AlphaSeq, shift: usize, n_fibers: usize, modes: usize) -> Result<BlockHankelMap> {
    let needed = 2 * n_fibers - 1 + shift;
    if modes < needed {
        return Err(Error::InsufficientModes {
            needed,
            got: modes,
        });
    }
    let sys = car_generators(modes)?;
    let diagonals = (0..=2 * n_fibers - 2)
        .map(|d| (alpha.value(d + shift), d + shift))
        .collect();
    Ok(BlockHankelMap {
        sys,
        n_fibers,
        diagonals,
    })
}

/// Dense Hankel operator `[a_{i+j} C_{i+j}]`, N x N blocks of size 2^modes.
pub fn hankel(alpha: &AlphaSeq, n_fibers: usize, modes: usize) -> Result<Operator> {
    Ok(hankel_map(alpha, 0, n_fibers, modes)?.dense())
}

/// Dense shifted Hankel operator `[a_{i+j+shift} C_{i+j+shift}]`.
pub fn shifted_hankel(
    alpha: &AlphaSeq,
    shift: usize,
    n_fibers: usize,
    modes: usize,
) -> Result<Operator> {
    Ok(hankel_map(alpha, shift, n_fibers, modes)?.dense())
}

/// Norm of the shifted Hankel operator, matrix-free.
pub fn shifted_hankel_norm(
    alpha: &AlphaSeq,
    shift: usize,
    n_fibers: usize,
    modes: usize,
) -> Result<f64> {
    let map = hankel_map(alpha, shift, n_fibers, modes)?;
    Ok(top_singular_value(&map, 1e-12, 600))
}

/// The block operator `[[S*, Y], [0, S]]` for a generator-valued Hankel Y.
#[derive(Debug, Clone)]
pub struct FoguelHankel {
    pub alpha: AlphaSeq,
    /// Hankel truncation: Y has n_fibers x n_fibers blocks.
    pub n_fibers: usize,
    pub modes: usize,
    /// Dense Y when the dimension allows it.
    pub y: Option<Operator>,
    /// Dense full block operator when the dimension allows it.
    pub r: Option<Operator>,
    /// Dense zero-symbol block operator `[[S*, 0], [0, S]]` alongside.
    pub r_zero: Option<Operator>,
}

/// Assemble the Foguel-Hankel data for a sequence rule.
pub fn foguel_hankel(alpha: &AlphaSeq, n_fibers: usize, modes: usize) -> Result<FoguelHankel> {
    if n_fibers == 0 {
        return Err(Error::InvalidParam("need at least one fiber".into()));
    }
    let needed = (2 * n_fibers).max(2) - 1;
    if modes < needed {
        return Err(Error::InsufficientModes {
            needed,
            got: modes,
        });
    }
    let fd = 1usize << modes;
    let half = n_fibers * fd;
    let y = if half <= DENSE_HANKEL_LIMIT {
        Some(hankel(alpha, n_fibers, modes)?)
    } else {
        None
    };
    let (r, r_zero) = if 2 * half <= DENSE_FOGUEL_LIMIT {
        let weights = vec![1.0; n_fibers.saturating_sub(1)];
        let s = shift_matrix(&weights, n_fibers, fd);
        let mut r0 = Operator::zeros(2 * half, 2 * half);
        r0.set_block(0, 0, &s.adjoint());
        r0.set_block(half, half, &s);
        let mut r = r0.clone();
        r.set_block(0, half, y.as_ref().unwrap());
        (Some(r), Some(r0))
    } else {
        (None, None)
    };
    Ok(FoguelHankel {
        alpha: alpha.clone(),
        n_fibers,
        modes,
        y,
        r,
        r_zero,
    })
}

impl FoguelHankel {
    /// Matrix-free corner of the n-th power difference,
    /// `sum_{k=0}^{n-1} S*^k Y S^{n-1-k}`.
    ///
    /// Block (i,l) collects the k with `i+k <= N-1` and `l+n-1-k <= N-1`,
    /// all contributing the same entry `a_{i+l+n-1} C_{i+l+n-1}`.
    pub fn power_corner(&self, n: usize) -> Result<PowerCornerMap> {
        if n == 0 {
            return Err(Error::InvalidParam("power must be >= 1".into()));
        }
        let sys = car_generators(self.modes)?;
        let nf = self.n_fibers;
        let mut blocks = Vec::new();
        for i in 0..nf {
            for l in 0..nf {
                let k_lo = (l + n).saturating_sub(nf); // l + n - 1 - k <= N-1
                let k_hi = (n - 1).min(nf - 1 - i); // i + k <= N-1
                if k_lo > k_hi {
                    continue;
                }
                let count = (k_hi - k_lo + 1) as f64;
                let gen = i + l + n - 1;
                let coef = count * self.alpha.value(gen);
                if coef != 0.0 {
                    blocks.push((i, l, coef, gen));
                }
            }
        }
        Ok(PowerCornerMap {
            sys,
            n_fibers: nf,
            blocks,
        })
    }
}

/// Matrix-free corner `sum_k S*^k Y S^{n-1-k}` with per-block coefficients.
#[derive(Debug, Clone)]
pub struct PowerCornerMap {
    sys: CarSystem,
    n_fibers: usize,
    /// (block row, block col, coefficient, generator index)
    blocks: Vec<(usize, usize, f64, usize)>,
}

impl PowerCornerMap {
    pub fn dense(&self) -> Operator {
        let fd = self.sys.dim();
        let dim = self.n_fibers * fd;
        let mut m = Operator::zeros(dim, dim);
        for &(i, l, coef, gen) in &self.blocks {
            for x in 0..fd {
                if let Some((y, s)) = self.sys.step_lower(gen, x) {
                    m[(i * fd + y, l * fd + x)] = Complex64::new(coef * s, 0.0);
                }
            }
        }
        m
    }
}

impl LinearMap for PowerCornerMap {
    fn domain_dim(&self) -> usize {
        self.n_fibers * self.sys.dim()
    }
    fn range_dim(&self) -> usize {
        self.domain_dim()
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let fd = self.sys.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for &(i, l, coef, gen) in &self.blocks {
            self.sys.accumulate_apply(
                gen,
                Complex64::new(coef, 0.0),
                &x[l * fd..(l + 1) * fd],
                &mut out[i * fd..(i + 1) * fd],
            );
        }
        out
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let fd = self.sys.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); y.len()];
        for &(i, l, coef, gen) in &self.blocks {
            self.sys.accumulate_apply_adjoint(
                gen,
                Complex64::new(coef, 0.0),
                &y[i * fd..(i + 1) * fd],
                &mut out[l * fd..(l + 1) * fd],
            );
        }
        out
    }
}

/// `||R(Y)^n - R(0)^n||` through the block power identity: the difference
/// has a single corner, `sum_{k=0}^{n-1} S*^k Y S^{n-1-k}`, evaluated
/// matrix-free. The direct dense subtraction lives in the oracle module.
pub fn power_diff_norm(fh: &FoguelHankel, n: usize) -> Result<f64> {
    let map = fh.power_corner(n)?;
    Ok(top_singular_value(&map, 1e-12, 600))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use rand::Rng;

    #[test]
    fn single_mode_generator() {
        let sys = car_generators(1).unwrap();
        let c0 = sys.generator(0).unwrap();
        let expect = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(c0.sub(&expect).max_abs() == 0.0);
        // C0 C0* + C0* C0 = I
        let acc = c0.mul_adjoint(&c0).add(&c0.adjoint_mul(&c0));
        assert!(acc.sub(&Operator::identity(2)).max_abs() == 0.0);
    }

    #[test]
    fn two_mode_anticommutation_dense() {
        let sys = car_generators(2).unwrap();
        let c0 = sys.generator(0).unwrap();
        let c1 = sys.generator(1).unwrap();
        let anti = c0.mul(&c1).add(&c1.mul(&c0));
        assert!(anti.max_abs() <= 1e-15);
        let mixed = c0.mul_adjoint(&c1).add(&c1.adjoint().mul(&c0));
        assert!(mixed.max_abs() <= 1e-15);
    }

    #[test]
    fn defects_zero_up_to_ten_modes() {
        for m in [1usize, 3, 6, 10] {
            let sys = car_generators(m).unwrap();
            let (cc, mixed) = sys.anticommutation_defects();
            assert!(cc <= 1e-12, "m = {m}: cc defect {cc}");
            assert!(mixed <= 1e-12, "m = {m}: mixed defect {mixed}");
        }
    }

    #[test]
    fn generator_norm_is_one() {
        for m in [1usize, 4] {
            let sys = car_generators(m).unwrap();
            let c0 = sys.generator(0).unwrap();
            assert!((c0.op_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn modes_out_of_range_rejected() {
        assert!(car_generators(0).is_err());
        assert!(car_generators(13).is_err());
    }

    #[test]
    fn lambda_is_isometric_on_coefficients() {
        let sys = car_generators(5).unwrap();
        // u = e0
        let e0 = vec![Complex64::new(1.0, 0.0)];
        let l = lambda_of(&sys, &e0).unwrap();
        assert!((l.op_norm() - 1.0).abs() < 1e-12);
        // u = (3, 4)/5
        let u = vec![Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)];
        let l = lambda_of(&sys, &u).unwrap();
        assert!((l.op_norm() - 1.0).abs() < 1e-10);
        // u = 0
        let z = vec![Complex64::new(0.0, 0.0); 3];
        assert_eq!(lambda_of(&sys, &z).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn lambda_norm_matches_euclidean_on_random_u() {
        let sys = car_generators(6).unwrap();
        let mut rng = instances::stream_rng(21, "lambda-random");
        for _ in 0..20 {
            let len = rng.gen_range(1..=6);
            let u: Vec<Complex64> = (0..len).map(|_| instances::complex_gaussian(&mut rng)).collect();
            let expect = crate::linalg::vec_norm(&u);
            let l = lambda_of(&sys, &u).unwrap();
            assert!((l.op_norm() - expect).abs() <= 1e-10 * expect.max(1.0));
        }
    }

    #[test]
    fn hankel_impulse_single_block() {
        let alpha = AlphaSeq::explicit(&[1.0]).unwrap();
        let y = hankel(&alpha, 2, 3).unwrap();
        // Only block (0,0) = C_0 is nonzero; norm 1.
        assert!((y.op_norm() - 1.0).abs() < 1e-12);
        let fd = 8;
        let lower_right = y.block(fd, fd, fd, fd);
        assert_eq!(lower_right.max_abs(), 0.0);
    }

    #[test]
    fn hankel_zero_sequence() {
        let alpha = AlphaSeq::explicit(&[0.0, 0.0]).unwrap();
        assert_eq!(hankel(&alpha, 2, 3).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn hankel_rejects_insufficient_modes() {
        let alpha = AlphaSeq::explicit(&[1.0]).unwrap();
        assert!(matches!(
            hankel(&alpha, 3, 4),
            Err(Error::InsufficientModes { .. })
        ));
    }

    #[test]
    fn shifted_hankel_norm_bound_random_sequences() {
        // ||[a_{i+j+n} C_{i+j+n}]|| <= (n+1) sqrt(tail(n)) with room to
        // spare: the row/column estimate gives sqrt(2 tail(n)).
        let mut rng = instances::stream_rng(33, "shifted-hankel");
        for trial in 0..5 {
            let table: Vec<f64> = (0..6).map(|_| rng.gen::<f64>() - 0.5).collect();
            let alpha = AlphaSeq::explicit(&table).unwrap();
            for n in 1..=4usize {
                let norm = shifted_hankel_norm(&alpha, n, 2, 8).unwrap();
                let tail = alpha.tail_sq(n).upper();
                let bound = (n as f64 + 1.0) * tail.sqrt();
                assert!(
                    norm <= bound + 1e-10,
                    "trial {trial} n {n}: {norm} vs {bound}"
                );
            }
        }
    }

    #[test]
    fn foguel_zero_symbol_is_contractive() {
        let alpha = AlphaSeq::explicit(&[0.0]).unwrap();
        let fh = foguel_hankel(&alpha, 2, 3).unwrap();
        let r = fh.r.as_ref().unwrap();
        assert!(r.op_norm() <= 1.0 + 1e-12);
        assert!(r.sub(fh.r_zero.as_ref().unwrap()).max_abs() == 0.0);
    }

    #[test]
    fn foguel_single_fiber_degenerate() {
        let alpha = AlphaSeq::explicit(&[1.0]).unwrap();
        let fh = foguel_hankel(&alpha, 1, 2).unwrap();
        let r = fh.r.as_ref().unwrap();
        assert_eq!(r.rows(), 2 * 4);
        // Both shift blocks vanish at one fiber.
        assert!(r.block(0, 0, 4, 4).max_abs() == 0.0);
        assert!(r.block(4, 4, 4, 4).max_abs() == 0.0);
    }

    #[test]
    fn power_diff_first_power_is_hankel_norm() {
        let alpha = AlphaSeq::explicit(&[1.0, 0.0]).unwrap();
        let fh = foguel_hankel(&alpha, 2, 3).unwrap();
        let v = power_diff_norm(&fh, 1).unwrap();
        assert!((v - 1.0).abs() <= 1e-10);
        // zero sequence: all power differences vanish
        let z = AlphaSeq::explicit(&[0.0]).unwrap();
        let fz = foguel_hankel(&z, 2, 3).unwrap();
        for n in 1..=3 {
            assert!(power_diff_norm(&fz, n).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn power_corner_matches_dense_subtraction() {
        let mut rng = instances::stream_rng(9, "corner-vs-subtraction");
        let table: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() - 0.5).collect();
        let alpha = AlphaSeq::explicit(&table).unwrap();
        let fh = foguel_hankel(&alpha, 3, 5).unwrap();
        let r = fh.r.as_ref().unwrap();
        let r0 = fh.r_zero.as_ref().unwrap();
        for n in 1..=4usize {
            let ident = power_diff_norm(&fh, n).unwrap();
            let direct = r.pow(n).sub(&r0.pow(n)).op_norm();
            assert!(
                (ident - direct).abs() <= 1e-10 * direct.max(1.0),
                "n = {n}: identity {ident} vs direct {direct}"
            );
        }
    }

    #[test]
    fn power_diff_square_sum_below_abel_functional() {
        // sum_n ||corner_n||^2 <= sum_n (n+1)^2 tail(n), the right side
        // agreeing with the weighted single-sum rearrangement.
        let mut rng = instances::stream_rng(14, "pipeline-b3");
        let table: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() - 0.5).collect();
        let alpha = AlphaSeq::explicit(&table).unwrap();
        let fh = foguel_hankel(&alpha, 4, 7).unwrap();
        let mut lhs = 0.0;
        for n in 1..=(2 * fh.n_fibers - 1) {
            let v = power_diff_norm(&fh, n).unwrap();
            lhs += v * v;
        }
        let chk = crate::sequences::abel_swap_check(&alpha, table.len());
        assert!(lhs <= chk.lhs + 1e-8, "{lhs} vs {}", chk.lhs);
        assert!((chk.lhs - chk.rhs).abs() <= 1e-12 * chk.lhs.max(1.0));
    }
}
