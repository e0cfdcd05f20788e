//! Fractional integral operators, hyperbolic p-convexity checks and
//! Hermite–Hadamard / Hermite–Hadamard–Fejér type bounds.
//!
//! The crate is organised bottom-up:
//!
//! - [`funcspec`]: expression trees with exact derivatives and a small text grammar.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration with endpoint-singularity handling.
//! - [`fracops`]: Riemann–Liouville and exponential-kernel fractional integrals.
//! - [`convexity`]: four independent tests for hyperbolic p-convexity.
//! - [`inequalities`]: weight constants and LHS/MID/RHS evaluators for every bound.
//! - [`generator`]: seeded factories for p-convex functions and symmetric weights.

// Negated comparisons are the NaN-rejecting form used for input checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod error;
pub mod fracops;
pub mod funcspec;
pub mod generator;
pub mod hyperbolic;
pub mod inequalities;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
pub use funcspec::{parse, FuncExpr, Interval, RealFn, SmoothFn};
pub use quadrature::{QuadConfig, QuadResult};
