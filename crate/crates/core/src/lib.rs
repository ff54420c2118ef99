//! Series-solution engine for linear fractional telegraph equations.
//!
//! The solver represents every iterate, source and assembled solution as a
//! finite fractional power series in one evolution variable whose
//! coefficients are separable factor functions of the remaining variables.
//! Exponents are kept symbolically as `p + q·γ`, so like terms merge exactly
//! and results can be compared structurally against closed forms.
//!
//! The crate is `no_std` and only needs `alloc`; transcendental functions
//! come from `libm`. File formats and the command-line frontend live in the
//! companion `qhatm` crate.

#![no_std]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod coords;
pub mod engine;
mod error;
pub mod factor;
pub mod problem;
pub mod series;
pub mod special;

pub use coords::Coords;
pub use engine::{assemble, k_m, solve, QhatmParams, Solution};
pub use error::QhatmError;
pub use factor::{Factor, FactorCatalog, FactorMatrix};
pub use problem::{builtin, EvolutionVar, ExactSolution, LowerTerm, ProblemSpec, BUILTIN_NAMES};
pub use series::{AffineExponent, FracSeries, Term};

pub type Result<T> = core::result::Result<T, QhatmError>;
