//! Matrix polynomials `[p_ij(z)]` and their functional calculus.
//!
//! A matrix polynomial is stored degree-major: `P(z) = sum_d A_d z^d` with
//! n x n complex coefficient matrices `A_d`. Scalar polynomials are the
//! n = 1 case. `P(T)` for an m x m operator `T` is the nm x nm block matrix
//! `[p_ij(T)]`, i.e. `sum_d A_d (x) T^d`.

use num_complex::Complex64;

use super::Operator;

#[derive(Debug, Clone)]
pub struct MatrixPolynomial {
    size: usize,
    /// Coefficient matrices, degree ascending. Trailing zero matrices allowed.
    coeffs: Vec<Operator>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<Operator>) -> Self {
        assert!(!coeffs.is_empty(), "at least one coefficient required");
        let size = coeffs[0].rows();
        for c in &coeffs {
            assert!(c.rows() == size && c.cols() == size, "square equal-size coefficients");
        }
        Self { size, coeffs }
    }

    /// Scalar polynomial from complex coefficients, degree ascending.
    pub fn scalar(coeffs: &[Complex64]) -> Self {
        let cs = coeffs
            .iter()
            .map(|&c| {
                let mut m = Operator::zeros(1, 1);
                m[(0, 0)] = c;
                m
            })
            .collect();
        Self::new(cs)
    }

    /// Scalar polynomial from real coefficients.
    pub fn scalar_re(coeffs: &[f64]) -> Self {
        let cs: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        Self::scalar(&cs)
    }

    /// The monomial z^d at matrix size 1.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![0.0; d + 1];
        coeffs[d] = 1.0;
        Self::scalar_re(&coeffs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[Operator] {
        &self.coeffs
    }

    /// Degree ignoring trailing zero coefficient matrices.
    pub fn degree(&self) -> usize {
        for d in (0..self.coeffs.len()).rev() {
            if self.coeffs[d].max_abs() > 0.0 {
                return d;
            }
        }
        0
    }

    /// Evaluate at a scalar point.
    pub fn eval_scalar(&self, z: Complex64) -> Operator {
        let mut acc = Operator::zeros(self.size, self.size);
        // Horner from the top coefficient down.
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(z);
            acc = acc.add(c);
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale_re(s)).collect())
    }

    /// Diagonal embedding of a scalar polynomial at matrix size n.
    pub fn diag_embed(scalar: &MatrixPolynomial, n: usize) -> Self {
        assert_eq!(scalar.size(), 1);
        let coeffs = scalar
            .coeffs
            .iter()
            .map(|c| Operator::identity(n).scale(c[(0, 0)]))
            .collect();
        Self::new(coeffs)
    }
}

/// `[p_ij(T)]` acting on the n-fold direct sum: block (i,j) is the Horner
/// evaluation of entry (i,j) at `T`.
pub fn matpoly_eval(p: &MatrixPolynomial, t: &Operator) -> Operator {
    assert!(t.is_square(), "matpoly_eval needs a square argument");
    let m = t.rows();
    let n = p.size();
    // Powers of T up to the (trailing-zero-trimmed) degree, computed once.
    let deg = p.degree();
    let mut powers = Vec::with_capacity(deg + 1);
    powers.push(Operator::identity(m));
    for _ in 0..deg {
        let next = powers.last().unwrap().mul(t);
        powers.push(next);
    }
    let mut out = Operator::zeros(n * m, n * m);
    for (d, pw) in powers.iter().enumerate() {
        let a_d = &p.coeffs()[d];
        for i in 0..n {
            for j in 0..n {
                let c = a_d[(i, j)];
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..m {
                    for s in 0..m {
                        out[(i * m + r, j * m + s)] += c * pw[(r, s)];
                    }
                }
            }
        }
    }
    out
}

/// Certified scan of `sup_{|z|=1} ||P(z)||`.
#[derive(Debug, Clone, Copy)]
pub struct CircleSup {
    /// Best value on the uniform grid.
    pub grid_value: f64,
    /// Value after local refinement around the best grid angle.
    pub refined_value: f64,
    pub grid_size: usize,
}

impl CircleSup {
    /// The certified value (a lower bound on the true supremum).
    pub fn value(&self) -> f64 {
        self.refined_value
    }
}

/// Largest singular value of `P(z)` over a uniform grid on the unit circle
/// followed by one local bracket-refinement pass. Every reported value is an
/// actual evaluation, hence a guaranteed lower bound on the supremum.
pub fn circle_sup_norm(p: &MatrixPolynomial, grid_size: usize) -> CircleSup {
    let grid_size = grid_size.max(256);
    let eval = |theta: f64| -> f64 {
        p.eval_scalar(Complex64::from_polar(1.0, theta)).op_norm()
    };
    let step = std::f64::consts::TAU / grid_size as f64;
    let mut best = 0.0f64;
    let mut best_theta = 0.0f64;
    for k in 0..grid_size {
        let theta = k as f64 * step;
        let v = eval(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let grid_value = best;
    let mut lo = best_theta - step;
    let mut hi = best_theta + step;
    let mut refined = best;
    let mut theta_star = best_theta;
    for _ in 0..48 {
        let h = (hi - lo) / 4.0;
        if h < 1e-13 {
            break;
        }
        for k in 0..=4 {
            let theta = lo + h * k as f64;
            let v = eval(theta);
            if v > refined {
                refined = v;
                theta_star = theta;
            }
        }
        lo = theta_star - h;
        hi = theta_star + h;
    }
    CircleSup {
        grid_value,
        refined_value: refined,
        grid_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_circle_sup_is_one() {
        for d in [1usize, 5, 12] {
            let p = MatrixPolynomial::monomial(d);
            let cs = circle_sup_norm(&p, 256);
            assert!((cs.value() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_plus_z_attains_two() {
        // |1 + e^{i t}| is maximal at t = 0 with value 2.
        let p = MatrixPolynomial::scalar_re(&[1.0, 1.0]);
        let cs = circle_sup_norm(&p, 256);
        assert!((cs.value() - 2.0).abs() < 1e-10);
        assert!(cs.grid_value <= cs.refined_value + 1e-15);
    }

    #[test]
    fn diag_z_one_matrix_poly() {
        // P = diag(z, 1): the evaluation is unitary on the circle.
        let zero = Operator::zeros(2, 2);
        let mut a0 = zero.clone();
        a0[(1, 1)] = Complex64::new(1.0, 0.0);
        let mut a1 = zero;
        a1[(0, 0)] = Complex64::new(1.0, 0.0);
        let p = MatrixPolynomial::new(vec![a0, a1]);
        let cs = circle_sup_norm(&p, 512);
        assert!((cs.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eval_identity_polynomial() {
        let p = MatrixPolynomial::monomial(1);
        let a = Operator::diag_re(&[2.0, 3.0]);
        let got = matpoly_eval(&p, &a);
        assert!(got.sub(&a).max_abs() < 1e-15);
    }

    #[test]
    fn eval_block_structure() {
        // P = [[1, z], [0, 1]] at the 1x1 operator [t].
        let mut a0 = Operator::identity(2);
        a0[(0, 1)] = Complex64::new(0.0, 0.0);
        let mut a1 = Operator::zeros(2, 2);
        a1[(0, 1)] = Complex64::new(1.0, 0.0);
        let p = MatrixPolynomial::new(vec![a0, a1]);
        let t = Operator::from_real_rows(&[&[0.7]]);
        let got = matpoly_eval(&p, &t);
        let expect = Operator::from_real_rows(&[&[1.0, 0.7], &[0.0, 1.0]]);
        assert!(got.sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn eval_nilpotent_square_is_zero() {
        let p = MatrixPolynomial::monomial(2);
        let jordan = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(matpoly_eval(&p, &jordan).max_abs(), 0.0);
    }
}
