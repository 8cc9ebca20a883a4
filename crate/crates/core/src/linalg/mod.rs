//! Dense complex linear algebra shared by every module.
//!
//! The carrier type is [`Operator`], a row-major dense complex matrix with
//! explicit dimensions. Norm and spectral routines are built on top of
//! nalgebra's SVD / self-adjoint eigendecomposition, a Lanczos iteration for
//! large operator norms, and a real Schur embedding for complex spectra.

mod json;
mod lanczos;
mod matmul;
mod poly;

pub use lanczos::{top_singular_value, LinearMap};
pub use poly::{circle_sup_norm, matpoly_eval, CircleSup, MatrixPolynomial};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Threshold under which operator norms go through a full SVD; above it a
/// Lanczos iteration on `A*A` is used.
pub const DENSE_SVD_LIMIT: usize = 1024;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Operator {
    /// Build from row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyOperator);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "entry count",
                left: format!("{}x{}", rows, cols),
                right: data.len().to_string(),
            });
        }
        if let Some(i) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty operator");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag_re(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Complex diagonal matrix.
    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Convenience: build from rows of (re, im) pairs.
    pub fn from_rows_re_im(rows: &[&[(f64, f64)]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| {
            let (re, im) = rows[i][j];
            Complex64::new(re, im)
        })
    }

    /// Build from real entries, row-major nested slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z *= s;
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z += w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z -= w;
        }
        out
    }

    /// `self += s * other`, entrywise.
    pub fn axpy(&mut self, s: Complex64, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (z, w) in self.data.iter_mut().zip(&other.data) {
            *z += s * w;
        }
    }

    /// Matrix product, cache-blocked (parallel when the `parallel` feature is on).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape ({}x{})({}x{})",
            self.rows, self.cols, other.rows, other.cols
        );
        matmul::matmul(self, other)
    }

    /// `self* · other`.
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        self.adjoint().mul(other)
    }

    /// `self · other*`.
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        self.mul(&other.adjoint())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.rows, x.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let xi = x[i].conj();
            for (j, a) in row.iter().enumerate() {
                out[j] += (a * xi).conj();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a * other[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Copy `block` into position with upper-left corner (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Extract the block with upper-left corner (r0, c0) of the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Horizontal concatenation of blocks.
    pub fn hcat(blocks: &[&Self]) -> Self {
        let rows = blocks[0].rows;
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        out
    }

    /// Power by repeated multiplication; exponent 0 yields the identity.
    pub fn pow(&self, n: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Power by binary exponentiation (used by oracles as an independent route).
    pub fn pow_binary(&self, mut n: usize) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum (the induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (j, z) in self.row(i).iter().enumerate() {
                sums[j] += z.norm();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Maximum absolute row sum (the induced sup-norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `(self + self*)/2`, forcing exact Hermitian symmetry.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    pub(crate) fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn from_na(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Largest singular value.
    ///
    /// Full SVD below [`DENSE_SVD_LIMIT`]; Lanczos on `A*A` above it.
    pub fn op_norm(&self) -> f64 {
        if self.rows.min(self.cols) == 0 {
            return 0.0;
        }
        let dim = self.rows.max(self.cols);
        if dim < DENSE_SVD_LIMIT {
            self.op_norm_svd()
        } else {
            lanczos::top_singular_value_dense(self)
        }
    }

    pub(crate) fn op_norm_svd(&self) -> f64 {
        let m = self.to_na();
        match m.try_svd(false, false, f64::EPSILON, 1000) {
            Some(svd) => svd.singular_values.iter().copied().fold(0.0, f64::max),
            // Golub-Kahan failed to settle; the Lanczos route is independent.
            None => lanczos::top_singular_value_dense(self),
        }
    }

    /// Eigenvalues of a general (square) complex matrix.
    ///
    /// Triangular inputs read off their diagonal; everything else goes
    /// through the real Schur form of the 2n x 2n embedding
    /// `[[Re, -Im], [Im, Re]]`, whose spectrum is the union of the spectrum
    /// and its conjugate. Structured matrices that stall the QR iteration
    /// are retried under a spectrum-preserving unitary conjugation.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        self.require_square()?;
        let n = self.rows;
        let mut lower = 0.0f64;
        let mut upper = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if j < i {
                    lower += self[(i, j)].norm_sqr();
                } else if j > i {
                    upper += self[(i, j)].norm_sqr();
                }
            }
        }
        if lower == 0.0 || upper == 0.0 {
            return Ok((0..n).map(|i| self[(i, i)]).collect());
        }
        let mut work = self.clone();
        for attempt in 0..3 {
            if let Some(eigs) = schur_eigenvalues(&work) {
                return Ok(eigs);
            }
            // Conjugation by a fixed unitary preserves the spectrum exactly
            // while breaking the structure that stalled the iteration.
            let mut rng = crate::instances::stream_rng(0xe16 + attempt, "eig-retry");
            let u = crate::instances::haar_unitary(&mut rng, n);
            work = u.adjoint_mul(&work).mul(&u);
        }
        Err(Error::EigFailure)
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Eigendecomposition of a Hermitian matrix: (ascending eigenvalues, unitary of columns).
    pub fn herm_eigen(&self) -> Result<(Vec<f64>, Operator)> {
        self.require_square()?;
        let m = self.hermitize().to_na();
        let se = nalgebra::linalg::SymmetricEigen::try_new(m, f64::EPSILON, 20000)
            .ok_or(Error::EigFailure)?;
        let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
        let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
        let n = self.rows;
        let vecs = Operator::from_fn(n, n, |i, j| se.eigenvectors[(i, idx[j])]);
        Ok((vals, vecs))
    }

    /// Unique PSD square root of a Hermitian PSD matrix.
    ///
    /// Eigenvalues in [-1e-12, 0) are clamped to zero; anything lower is an
    /// error.
    pub fn psd_sqrt(&self) -> Result<Operator> {
        let defect = self.hermitian_defect();
        if defect > 1e-8 * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        let (vals, vecs) = self.herm_eigen()?;
        let scale = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
        if vals[0] < -1e-12 * scale.max(1.0) && vals[0] < -1e-12 {
            return Err(Error::NotPsd { min_eig: vals[0] });
        }
        let sqrt_vals: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
        Ok(rebuild_hermitian(&sqrt_vals, &vecs))
    }

    /// Inverse through LU with partial pivoting.
    pub fn inverse(&self) -> Result<Operator> {
        self.require_square()?;
        let lu = nalgebra::linalg::LU::new(self.to_na());
        match lu.try_inverse() {
            Some(inv) => Ok(Self::from_na(&inv)),
            None => Err(Error::InvalidParam("singular matrix".into())),
        }
    }

    /// Solve `self · X = rhs`.
    pub fn solve(&self, rhs: &Operator) -> Result<Operator> {
        self.require_square()?;
        let lu = nalgebra::linalg::LU::new(self.to_na());
        match lu.solve(&rhs.to_na()) {
            Some(x) => Ok(Self::from_na(&x)),
            None => Err(Error::InvalidParam("singular matrix".into())),
        }
    }

    /// Thin orthonormal basis for the column span (QR-based).
    pub fn orthonormal_columns(&self) -> Operator {
        let qr = nalgebra::linalg::QR::new(self.to_na());
        let q = qr.q();
        Self::from_na(&q)
    }
}

impl std::ops::Index<(usize, usize)> for Operator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let c = self.cols;
        &mut self.data[i * c + j]
    }
}

fn schur_eigenvalues(a: &Operator) -> Option<Vec<Complex64>> {
    let n = a.rows();
    let mut emb = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            emb[(i, j)] = z.re;
            emb[(i, j + n)] = -z.im;
            emb[(i + n, j)] = z.im;
            emb[(i + n, j + n)] = z.re;
        }
    }
    let schur = nalgebra::linalg::Schur::try_new(emb, f64::EPSILON, 20000)?;
    let eigs = schur.complex_eigenvalues();
    // The embedding doubles the spectrum with its conjugate; callers use
    // moduli, so return everything.
    Some(eigs.iter().map(|z| Complex64::new(z.re, z.im)).collect())
}

/// Assemble `V diag(vals) V*` for a Hermitian result.
pub(crate) fn rebuild_hermitian(vals: &[f64], vecs: &Operator) -> Operator {
    let n = vecs.rows();
    let mut scaled = vecs.clone();
    for j in 0..n {
        for i in 0..n {
            scaled[(i, j)] *= Complex64::new(vals[j], 0.0);
        }
    }
    scaled.mul_adjoint(vecs).hermitize()
}

/// Numerical radius: `max_theta lambda_max((e^{i t}A + e^{-i t}A*)/2)`.
///
/// Scans a uniform grid of at least 1024 angles, then shrinks a local
/// bracket around the best angle down to absolute accuracy 1e-8.
pub fn numerical_radius(a: &Operator) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let herm_top = |theta: f64| -> f64 {
        let rot = Complex64::from_polar(1.0, theta);
        let m = a.scale(rot).hermitize();
        match m.herm_eigen() {
            Ok((vals, _)) => *vals.last().unwrap(),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let grid = 1024usize;
    let step = std::f64::consts::TAU / grid as f64;
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..grid {
        let theta = k as f64 * step;
        let v = herm_top(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    // Local 5-point bracket shrink; robust even at eigenvalue-crossing kinks.
    let mut lo = best_theta - step;
    let mut hi = best_theta + step;
    for _ in 0..60 {
        let h = (hi - lo) / 4.0;
        if h < 1e-12 {
            break;
        }
        let mut local_best = best;
        let mut local_theta = best_theta;
        for k in 0..=4 {
            let theta = lo + h * k as f64;
            let v = herm_top(theta);
            if v > local_best {
                local_best = v;
                local_theta = theta;
            }
        }
        best = local_best;
        best_theta = local_theta;
        lo = best_theta - h;
        hi = best_theta + h;
    }
    Ok(best.max(0.0))
}

/// Lower/upper bracket for the induced p-norm.
///
/// The lower bound samples p-normalized vectors; the upper bound is the
/// interpolation estimate `|A|_1^{1/p} |A|_inf^{1-1/p}`.
pub fn induced_pnorm_bracket(
    a: &Operator,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if p <= 1.0 {
        return Err(Error::InvalidParam(format!("p must exceed 1, got {}", p)));
    }
    a.require_square()?;
    let hi = a.norm_one().powf(1.0 / p) * a.norm_inf().powf(1.0 - 1.0 / p);
    let mut rng = crate::instances::stream_rng(seed, "induced-pnorm");
    let n = a.cols();
    let mut lo: f64 = 0.0;
    for _ in 0..samples.max(1) {
        let x = crate::instances::random_unit_pvector(&mut rng, n, p);
        let y = a.matvec(&x);
        lo = lo.max(pnorm(&y, p));
    }
    // A loose grid can undershoot; the bracket ordering itself is exact.
    Ok((lo.min(hi), hi))
}

pub fn pnorm(x: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    x.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn op_norm_identity_is_one() {
        assert!((Operator::identity(3).op_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_rank_one_nilpotent() {
        // [[0,2],[0,0]] has singular values {2, 0}.
        let a = Operator::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((a.op_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_diagonal() {
        let a = Operator::diag_re(&[0.3, -0.7]);
        assert!((a.op_norm() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn empty_operator_rejected() {
        assert!(matches!(
            Operator::new(0, 3, vec![]),
            Err(Error::EmptyOperator)
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let r = Operator::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite(1))));
    }

    #[test]
    fn numerical_radius_hermitian_diag() {
        let a = Operator::diag_re(&[1.0, -3.0]);
        assert!((numerical_radius(&a).unwrap() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn numerical_radius_jordan_block() {
        // 2x2 nilpotent block: radius is half the off-diagonal modulus.
        let a = Operator::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((numerical_radius(&a).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn numerical_radius_zero() {
        let a = Operator::zeros(3, 3);
        assert!(numerical_radius(&a).unwrap().abs() < 1e-12);
    }

    #[test]
    fn numerical_radius_rejects_rectangular() {
        let a = Operator::zeros(2, 3);
        assert!(numerical_radius(&a).is_err());
    }

    #[test]
    fn psd_sqrt_diagonal() {
        let g = Operator::diag_re(&[4.0, 9.0]);
        let l = g.psd_sqrt().unwrap();
        assert!(l.sub(&Operator::diag_re(&[2.0, 3.0])).max_abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_identity_exact() {
        let l = Operator::identity(4).psd_sqrt().unwrap();
        assert!(l.sub(&Operator::identity(4)).max_abs() == 0.0);
    }

    #[test]
    fn psd_sqrt_two_by_two() {
        // [[2,1],[1,2]]: eigenvalues 3 and 1, so the root has sqrt(3), 1
        // on the same eigenvectors.
        let g = Operator::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let l = g.psd_sqrt().unwrap();
        let s3 = 3.0f64.sqrt();
        let expect = Operator::from_real_rows(&[
            &[(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0],
            &[(s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0],
        ]);
        assert!(l.sub(&expect).max_abs() < 1e-12);
        assert!(l.mul(&l).sub(&g).op_norm() < 1e-10);
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let g = Operator::diag_re(&[1.0, -1e-6]);
        assert!(matches!(g.psd_sqrt(), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn eigenvalues_of_complex_diag() {
        let a = Operator::diag(&[c(0.0, 1.0), c(-0.5, 0.25)]);
        let r = a.spectral_radius().unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_radius_jordan() {
        let a = Operator::from_real_rows(&[&[0.0, 5.0], &[0.0, 0.0]]);
        assert!(a.spectral_radius().unwrap() < 1e-6);
    }

    #[test]
    fn induced_pnorm_identity() {
        let (lo, hi) = induced_pnorm_bracket(&Operator::identity(3), 2.5, 64, 7).unwrap();
        assert!((hi - 1.0).abs() < 1e-12);
        assert!(lo <= hi + 1e-12 && lo > 0.99);
    }

    #[test]
    fn induced_pnorm_permutation_isometry() {
        let p = Operator::from_real_rows(&[
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0],
        ]);
        for pe in [1.5, 2.0, 3.0] {
            let (lo, hi) = induced_pnorm_bracket(&p, pe, 64, 11).unwrap();
            assert!((hi - 1.0).abs() < 1e-12);
            assert!((lo - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn induced_pnorm_bracket_contains_golden_ratio() {
        let a = Operator::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let (lo, hi) = induced_pnorm_bracket(&a, 2.0, 256, 3).unwrap();
        assert!(lo <= phi + 1e-9);
        assert!((hi - 2.0).abs() < 1e-12);
        assert!(lo <= hi);
    }

    #[test]
    fn induced_pnorm_rejects_small_p() {
        assert!(induced_pnorm_bracket(&Operator::identity(2), 1.0, 8, 0).is_err());
    }

    #[test]
    fn kron_shapes_and_values() {
        let a = Operator::from_real_rows(&[&[1.0, 2.0]]);
        let b = Operator::identity(2);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k[(0, 0)], c(1.0, 0.0));
        assert_eq!(k[(1, 3)], c(2.0, 0.0));
    }

    #[test]
    fn pow_binary_matches_iterative() {
        let a = Operator::from_rows_re_im(&[
            &[(0.1, 0.3), (0.2, -0.1)],
            &[(-0.4, 0.0), (0.05, 0.2)],
        ]);
        for n in 0..8 {
            assert!(a.pow(n).sub(&a.pow_binary(n)).max_abs() < 1e-13);
        }
    }
}
