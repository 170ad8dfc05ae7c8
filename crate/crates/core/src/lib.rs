//! Fractional derivative operators (Riemann-Liouville, Caputo, Jumarie,
//! Grünwald-Letnikov, and the local KG and difference-quotient derivatives)
//! with numerical checks of the algebraic laws they do or do not satisfy,
//! and an exact solver for derivation spaces of finite algebras.

// `!(x > y)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod corpus;
pub mod derivations;
pub mod error;
pub mod frac_ops;
pub mod local_ops;
pub mod numerics;

pub use error::{Error, Result};
