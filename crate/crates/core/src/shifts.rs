//! Truncated weighted shifts, semi-invariant compressions and a concrete
//! unitary power dilation.
//!
//! A truncated shift of dimension N and multiplicity mult maps fiber n to
//! fiber n+1 scaled by w_n = beta(n+1)/beta(n); the last fiber maps to zero.
//! The dilation is the cyclic block construction built from the rotation
//! block [[T, D_T*], [D_T, -T*]], which reproduces the powers of a
//! contraction under compression for as long as the shifted-off defect has
//! not wrapped back around.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::sequences::BetaWeight;

/// Truncated weighted unilateral shift with fiber multiplicity.
#[derive(Debug, Clone)]
pub struct TruncatedShift {
    pub n_fibers: usize,
    pub multiplicity: usize,
    pub weights: Vec<f64>,
    pub matrix: Operator,
}

/// Assemble the truncated shift for a weight rule.
pub fn truncated_weighted_shift(
    beta: &BetaWeight,
    n_fibers: usize,
    multiplicity: usize,
) -> Result<TruncatedShift> {
    if n_fibers < 2 {
        return Err(Error::InvalidParam(format!(
            "truncation needs at least 2 fibers, got {n_fibers}"
        )));
    }
    if multiplicity == 0 {
        return Err(Error::InvalidParam("multiplicity must be positive".into()));
    }
    let weights = beta.shift_weights(n_fibers - 1)?;
    let matrix = shift_matrix(&weights, n_fibers, multiplicity);
    Ok(TruncatedShift {
        n_fibers,
        multiplicity,
        weights,
        matrix,
    })
}

/// The matrix of a weighted shift (fiber n -> fiber n+1 with weight w_n),
/// tensored with the identity on each fiber.
pub fn shift_matrix(weights: &[f64], n_fibers: usize, multiplicity: usize) -> Operator {
    assert!(weights.len() >= n_fibers - 1);
    let dim = n_fibers * multiplicity;
    let mut m = Operator::zeros(dim, dim);
    for n in 0..n_fibers - 1 {
        let w = Complex64::new(weights[n], 0.0);
        for j in 0..multiplicity {
            m[((n + 1) * multiplicity + j, n * multiplicity + j)] = w;
        }
    }
    m
}

impl TruncatedShift {
    /// Operator norm is the largest weight.
    pub fn norm(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }
}

/// Norm of `I - 2 D*D + D*^2 D^2` compressed to the interior fibers
/// (0..=N-3), where the truncation agrees with the untruncated identity.
pub fn two_isometry_defect(shift: &TruncatedShift) -> Result<f64> {
    let n = shift.n_fibers;
    if n < 4 {
        return Err(Error::InvalidParam(
            "two-isometry defect needs at least 4 fibers".into(),
        ));
    }
    let d = &shift.matrix;
    let dd = d.adjoint_mul(d);
    let d2 = d.mul(d);
    let d2d2 = d2.adjoint_mul(&d2);
    let m = Operator::identity(d.rows())
        .sub(&dd.scale_re(2.0))
        .add(&d2d2);
    let interior = (n - 2) * shift.multiplicity;
    Ok(m.block(0, 0, interior, interior).op_norm())
}

#[derive(Debug, Clone)]
pub struct SarasonReport {
    /// Compression of R to H1 (-) H2.
    pub compression: Operator,
    /// Orthonormal basis of the compression subspace (columns).
    pub basis: Operator,
    /// max over n <= n_max of ||T^n - P R^n P|| on the subspace.
    pub max_defect: f64,
}

/// Verify that compression to `H1 (-) H2` is multiplicative on powers.
///
/// Both subspaces must be invariant under `R` (checked to 1e-10); the
/// compression `T = P R|H` then satisfies `T^n = P R^n|H` and the returned
/// defect is the observed maximum deviation.
pub fn sarason_check(
    r: &Operator,
    h1_basis: &Operator,
    h2_basis: Option<&Operator>,
    n_max: usize,
) -> Result<SarasonReport> {
    if !r.is_square() {
        return Err(Error::NotSquare {
            rows: r.rows(),
            cols: r.cols(),
        });
    }
    let dim = r.rows();
    if h1_basis.rows() != dim {
        return Err(Error::DimensionMismatch {
            context: "subspace basis",
            left: dim.to_string(),
            right: h1_basis.rows().to_string(),
        });
    }
    let b1 = h1_basis.orthonormal_columns();
    let p1 = b1.mul_adjoint(&b1);
    let scale = r.op_norm().max(1.0);
    let inv1 = leakage(r, &p1) / scale;
    if inv1 > 1e-10 {
        return Err(Error::NotInvariant {
            which: "H1",
            defect: inv1,
        });
    }
    let p2 = match h2_basis {
        Some(b) => {
            if b.rows() != dim {
                return Err(Error::DimensionMismatch {
                    context: "subspace basis",
                    left: dim.to_string(),
                    right: b.rows().to_string(),
                });
            }
            let b2 = b.orthonormal_columns();
            // Containment H2 <= H1.
            let outside = b2.sub(&p1.mul(&b2)).op_norm();
            if outside > 1e-10 {
                return Err(Error::NotInvariant {
                    which: "H2 not inside H1",
                    defect: outside,
                });
            }
            let p2 = b2.mul_adjoint(&b2);
            let inv2 = leakage(r, &p2) / scale;
            if inv2 > 1e-10 {
                return Err(Error::NotInvariant {
                    which: "H2",
                    defect: inv2,
                });
            }
            p2
        }
        None => Operator::zeros(dim, dim),
    };
    // Orthonormal basis of H = H1 (-) H2 from the spectral projector P1 - P2.
    let p = p1.sub(&p2).hermitize();
    let (vals, vecs) = p.herm_eigen()?;
    let keep: Vec<usize> = (0..dim).filter(|&i| vals[i] > 0.5).collect();
    if keep.is_empty() {
        return Err(Error::InvalidParam("H1 (-) H2 is trivial".into()));
    }
    let basis = Operator::from_fn(dim, keep.len(), |i, j| vecs[(i, keep[j])]);
    let t = basis.adjoint_mul(r).mul(&basis);
    let mut max_defect = 0.0f64;
    let mut t_pow = Operator::identity(keep.len());
    let mut r_pow = Operator::identity(dim);
    for _ in 1..=n_max {
        t_pow = t_pow.mul(&t);
        r_pow = r_pow.mul(r);
        let compressed = basis.adjoint_mul(&r_pow).mul(&basis);
        max_defect = max_defect.max(t_pow.sub(&compressed).op_norm());
    }
    Ok(SarasonReport {
        compression: t,
        basis,
        max_defect,
    })
}

/// How much R maps ran(P) outside of ran(P).
fn leakage(r: &Operator, p: &Operator) -> f64 {
    let rp = r.mul(p);
    Operator::identity(p.rows()).sub(p).mul(&rp).op_norm()
}

/// Cyclic unitary power dilation of a contraction on 2N+1 fiber copies.
///
/// Returns `(U, embed)` with `U` unitary to 1e-10 and
/// `T^n = embed* U^n embed` for 1 <= n <= N (exact up to 2N, before the
/// wrapped defect re-enters the center fiber).
pub fn schaeffer_dilation(t: &Operator, n_steps: usize) -> Result<(Operator, Operator)> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if n_steps == 0 {
        return Err(Error::InvalidParam("dilation needs n_steps >= 1".into()));
    }
    let norm = t.op_norm();
    if norm > 1.0 + 1e-12 {
        return Err(Error::NotContraction { norm });
    }
    let h = t.rows();
    let copies = 2 * n_steps + 1;
    let dim = copies * h;
    let id = Operator::identity(h);
    // Defect operators; roundoff below the clamp is absorbed by psd_sqrt.
    let d_t = id.sub(&t.adjoint_mul(t)).hermitize().psd_sqrt()?;
    let d_ts = id.sub(&t.mul_adjoint(t)).hermitize().psd_sqrt()?;

    // Layout: logical fiber index -N..N stored at slot (index + N).
    let n = n_steps as isize;
    let slot = |logical: isize| -> usize { (logical + n) as usize * h };
    let mut u = Operator::zeros(dim, dim);
    // Forward shift away from the rotation block; the top fiber wraps to
    // the bottom to close the cycle.
    for j in -n..=-2 {
        u.set_block(slot(j + 1), slot(j), &id);
    }
    for j in 1..n {
        u.set_block(slot(j + 1), slot(j), &id);
    }
    u.set_block(slot(-n), slot(n), &id);
    // Rotation block mixing fibers -1 and 0 into 0 and 1.
    u.set_block(slot(0), slot(0), t);
    u.set_block(slot(0), slot(-1), &d_ts);
    u.set_block(slot(1), slot(0), &d_t);
    u.set_block(slot(1), slot(-1), &t.adjoint().scale_re(-1.0));

    let mut embed = Operator::zeros(dim, h);
    embed.set_block(slot(0), 0, &id);
    Ok((u, embed))
}
