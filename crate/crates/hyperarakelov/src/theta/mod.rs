//! Riemann theta functions with half-integer characteristics, Faltings' norm, the modular
//! discriminant and the Thomae and discriminant identities.

mod chars;
mod eval;
mod modular;
mod norm;

pub use chars::{CharTable, ThetaChar};
pub use eval::{tail_bound, ThetaConfig, ThetaEvaluator};
pub use modular::{
    branch_characteristic, disc_identity_residual, gamma_constant, log_norm_delta, log_petersson_phi, phi_g,
    thomae_residual, thomae_residual_for, LogComplex, VANISH_TOL,
};
pub use norm::{riemann_characteristic, CharacteristicScan, FaltingsNorm, SCAN_TOL};
