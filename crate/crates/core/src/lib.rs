//! opsim-core: a finite-matrix laboratory for operator similarity questions.
//!
//! The crate provides, on dense complex matrices:
//!
//! - norms, numerical radii, PSD calculus and matrix-polynomial functional
//!   calculus ([`linalg`]);
//! - square-summable scalar sequences and shift weight functions with their
//!   summability functionals ([`sequences`]);
//! - truncated weighted shifts, semi-invariant compressions and a concrete
//!   unitary power dilation ([`shifts`]);
//! - anticommuting generator systems and the block Hankel / Foguel operators
//!   built from them ([`car`]);
//! - weighted quadratic nearness between two operators ([`nearness`]);
//! - the constrained-quadratic renorming that turns nearness into an explicit
//!   similarity with certified equivalence constants ([`renorm`]);
//! - sampled polynomial-dominance ratios ([`dominance`]);
//! - dilation-class membership diagnostics ([`dilation`]);
//! - brute-force oracles for everything above ([`oracles`]).

pub mod car;
pub mod dilation;
pub mod dominance;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod nearness;
pub mod oracles;
pub mod renorm;
pub mod sequences;
pub mod shifts;

pub use error::{Error, Result};
pub use linalg::Operator;
