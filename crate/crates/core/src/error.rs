//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty operator")]
    EmptyOperator,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: {context} ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },
    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("not PSD: smallest eigenvalue {min_eig:.3e} below tolerance")]
    NotPsd { min_eig: f64 },
    #[error("not Hermitian: asymmetry {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("not invariant: defect {defect:.3e} at subspace {which}")]
    NotInvariant { which: &'static str, defect: f64 },
    #[error("not an isometry: defect {defect:.3e}")]
    NotIsometry { defect: f64 },
    #[error("not unitary: defect {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("not a contraction: norm {norm}")]
    NotContraction { norm: f64 },
    #[error("insufficient modes: need at least {needed}, got {got}")]
    InsufficientModes { needed: usize, got: usize },
    #[error("mode count {0} outside supported range 1..=12")]
    ModesOutOfRange(usize),
    #[error("degenerate weights: condition estimate {cond:.3e}")]
    DegenerateWeights { cond: f64 },
    #[error("family annihilated: all {skipped} denominators below floor")]
    AnnihilatedFamily { skipped: usize },
    #[error("non-positive weight at n = {index}: {value}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("power identity fails at k = {k}: defect {defect:.3e}")]
    IdentityDefect { k: usize, defect: f64 },
    #[error("no convergence after {iters} iterations (best value {best})")]
    NoConvergence { iters: usize, best: f64 },
    #[error("eigenvalue iteration failed to converge")]
    EigFailure,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
