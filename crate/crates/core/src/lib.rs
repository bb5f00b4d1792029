//! Quantum Kaniadakis (α-deformed) entropy toolkit.
//!
//! The crate computes κ-deformed functions and the kernel
//! `K̂_α(x) = x^{1-α} - x^{1+α}`, conditional and mutual κ-entropies of
//! Werner, Weyl (Bell-diagonal), isotropic and two-qudit Werner states,
//! their fully entangled fraction, executable checks of the implicit bounds
//! linking the two, and k-copy steering thresholds for isotropic states.
//!
//! Everything is a pure function of its arguments. Numerical oracles
//! (a cyclic Jacobi eigensolver, explicit density matrices) live next to the
//! closed-form spectra so the two routes can be compared.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod fef;
pub mod kdeform;
pub mod linalg;
pub mod states;
pub mod steering;

pub use error::{Error, Result};
pub use kdeform::Alpha;
pub use states::{Spectrum, StateFamily};
