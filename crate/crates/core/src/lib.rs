//! Fiberized analysis of Gabor systems `G(g, a, b)`.
//!
//! The frame operator of a Gabor system commutes with translations by `a`
//! and modulations by `b`, so it decomposes over the fibers `x ∈ [0, 1/b)`
//! into a field of Hermitian matrices. This crate models that decomposition
//! on a uniform sample grid:
//!
//! * [`valg`]: the commutative algebra `L∞[0, P]` as a field of samples.
//! * [`hmod`]: truncated module vectors over that algebra, the algebra-valued
//!   inner product, weak frame bounds, analysis/synthesis and canonical duals.
//! * [`schur`]: the Schur test for matrices with algebra-valued entries.
//! * [`spaces`]: windows, the bracket product, fiberization and the
//!   `W(L∞,ℓ¹) ⊂ W(L∞,ℓ²) ⊂ X ⊂ L∞(ℓ²)` membership chain.
//! * [`gabor`]: correlation functions, Bessel estimators, frame bounds,
//!   Parseval and Wexler–Raz tests, dual windows and the Walnut representation.
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `parallel`
//! feature to evaluate fiber loops on the rayon thread pool.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod error;
pub mod gabor;
pub mod hmod;
pub mod linalg;
mod par;
pub mod schur;
pub mod spaces;
mod tol;
pub mod valg;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tol::Tolerances;
