//! Exact symmetric functions: Schur polynomials, their power-sum expansion and the
//! sigma polynomials `sigma_g` together with their leading terms.

mod newton;
mod partition;
mod poly;
mod schur;
mod sigma;

pub use newton::{centralizer_order, character, newton_expansion, NewtonExpansion};
pub use partition::Partition;
pub use poly::{det, det_bigint, rat, rat_string, SymPoly};
pub use schur::{elementary, power_sum, schur, schur_at_ones};
pub use sigma::{
    binomial, binomial_wronskian_det, hankel, power_wronskian_det, s_g, sigma_g, sigma_leading_scalar,
    sigma_report, sigma_weights,
};
