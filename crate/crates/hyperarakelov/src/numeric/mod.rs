//! Numerical building blocks shared by the period, theta and invariant layers.

pub mod cubature;
pub mod limits;
pub mod quad;
pub mod roots;
