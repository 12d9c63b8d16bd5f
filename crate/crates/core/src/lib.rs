//! Exact construction and verification of the operators behind the
//! rationality of half-spin representations for forms of `SO*(2n)`.
//!
//! Everything is computed over a quadratic tower `Q ⊆ E0 ⊆ E` with exact
//! rational coordinates. The crate is `no_std` and only needs `alloc`.
//!
//! Module map:
//! - [`field`]: the tower, conjugation, norms, real-embedding signs, norm oracle
//! - [`operator`]: sparse matrices and linear / conjugate-linear operators
//! - [`exterior`]: `⋀•W1` on bitmask blades and the Clifford action
//! - [`forms`]: the Hermitian data `ψ`, the operator `J`, good-basis swaps
//! - [`spinrep`]: `so(W, b)` generators, the `g0` basis and the spin lift
//! - [`hodge`]: the Hodge star and the operators `L±`
//! - [`rationality`]: verdicts, weights, real forms and the end-to-end scenario

#![no_std]

extern crate alloc;

pub mod exterior;
pub mod field;
pub mod forms;
pub mod hodge;
pub mod operator;
pub mod rationality;
pub mod spinrep;

mod error;

pub use error::Error;
pub use field::{FieldElement, NormVerdict, Rational, Tower, TowerSpec};
pub use operator::{Linearity, LinOp, SparseMatrix};
