//! Arakelov invariants of hyperelliptic curves `y^2 = f(x)` with `deg f = 2g + 1`.
//!
//! The pipeline runs curve -> periods -> theta -> invariants. [`symfunc`] is independent
//! and provides the exact sigma polynomials.

pub mod cli;
pub mod curve;
pub mod error;
pub mod invariants;
pub mod numeric;
pub mod periods;
pub mod symfunc;
pub mod theta;

pub use error::{Error, Result};
