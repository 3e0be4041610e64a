use std::f64::consts::PI;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::Serialize;

use super::chars::{CharTable, ThetaChar};
use super::eval::ThetaEvaluator;
use crate::error::{Error, Result};
use crate::periods::{CVec, Periods};

/// A complex number stored as `log|z|` and `arg z`, for products far outside `f64` range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub arg: f64,
}

impl LogComplex {
    pub fn from_complex(z: Complex64) -> Self {
        LogComplex { log_abs: z.norm().ln(), arg: z.arg() }
    }

    pub fn powi(self, k: i64) -> Self {
        LogComplex { log_abs: self.log_abs * k as f64, arg: (self.arg * k as f64).rem_euclid(2.0 * PI) }
    }

    /// `|self / other - 1|`.
    pub fn relative_residual(self, other: LogComplex) -> f64 {
        let q = self / other;
        (Complex64::from_polar(q.log_abs.exp(), q.arg) - 1.0).norm()
    }

    pub fn one() -> Self {
        LogComplex { log_abs: 0.0, arg: 0.0 }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, o: LogComplex) -> LogComplex {
        LogComplex { log_abs: self.log_abs + o.log_abs, arg: (self.arg + o.arg).rem_euclid(2.0 * PI) }
    }
}

impl Div for LogComplex {
    type Output = LogComplex;

    fn div(self, o: LogComplex) -> LogComplex {
        LogComplex { log_abs: self.log_abs - o.log_abs, arg: (self.arg - o.arg).rem_euclid(2.0 * PI) }
    }
}

/// Threshold below which a theta constant of a discriminant factor counts as vanishing.
pub const VANISH_TOL: f64 = 1e-8;

/// `phi_g(tau) = prod_T theta[eta_{T o U}](0; tau)^8` in log form.
pub fn phi_g(ev: &ThetaEvaluator, table: &CharTable) -> Result<LogComplex> {
    let zero = CVec::zeros(table.g);
    let mut acc = LogComplex::one();
    for ch in table.discriminant_chars() {
        let v = ev.theta(&ch, &zero);
        if v.norm() < VANISH_TOL {
            return Err(Error::VanishingTheta(format!("theta{ch}(0) = {v:e}")));
        }
        acc = acc * LogComplex::from_complex(v).powi(8);
    }
    Ok(acc)
}

/// `log ||phi_g|| = 2r log det Im tau + log |phi_g|`.
pub fn log_petersson_phi(periods: &Periods, ev: &ThetaEvaluator, table: &CharTable) -> Result<f64> {
    let phi = phi_g(ev, table)?;
    Ok(2.0 * table.r() as f64 * periods.det_y.ln() + phi.log_abs)
}

/// `log ||Delta_g|| = log ||phi_g|| - (4g+4) n log 2`.
pub fn log_norm_delta(periods: &Periods, ev: &ThetaEvaluator, table: &CharTable) -> Result<f64> {
    let g = table.g as f64;
    Ok(log_petersson_phi(periods, ev, table)? - (4.0 * g + 4.0) * table.n() as f64 * 2f64.ln())
}

fn log_pair_product(a: &[Complex64], idx: &[usize]) -> LogComplex {
    let mut acc = LogComplex::one();
    for (i, &k) in idx.iter().enumerate() {
        for &l in &idx[i + 1..] {
            acc = acc * LogComplex::from_complex((a[k] - a[l]).powi(2));
        }
    }
    acc
}

/// Thomae's formula for the characteristic `eta_{T o U}`:
/// `theta^8 = (det mu)^4 pi^{-4g} prod_{k<l in T}(a_k-a_l)^2 prod_{k<l not in T}(a_k-a_l)^2`.
/// Returns the relative residual. `T = U` gives the zero characteristic.
pub fn thomae_residual_for(periods: &Periods, ev: &ThetaEvaluator, table: &CharTable, t: &[usize]) -> f64 {
    let g = table.g;
    let a = periods.curve().roots();
    let ch = table.eta_set(&CharTable::sym_diff(t, &table.u_set()));
    let lhs = LogComplex::from_complex(ev.theta(&ch, &CVec::zeros(g))).powi(8);
    let comp: Vec<usize> = (0..a.len()).filter(|k| !t.contains(k)).collect();
    let rhs = LogComplex::from_complex(periods.det_mu).powi(4)
        * LogComplex { log_abs: -4.0 * g as f64 * PI.ln(), arg: 0.0 }
        * log_pair_product(a, t)
        * log_pair_product(a, &comp);
    lhs.relative_residual(rhs)
}

pub fn thomae_residual(periods: &Periods, ev: &ThetaEvaluator, table: &CharTable) -> f64 {
    thomae_residual_for(periods, ev, table, &table.u_set())
}

/// Residual of `D^n = pi^{4gr} (det mu)^{-4r} phi_g(tau)`.
pub fn disc_identity_residual(periods: &Periods, ev: &ThetaEvaluator, table: &CharTable) -> Result<f64> {
    let g = table.g as f64;
    let (r, n) = (table.r() as i64, table.n() as i64);
    let lhs = LogComplex::from_complex(periods.curve().discriminant()).powi(n);
    let rhs = LogComplex { log_abs: 4.0 * g * r as f64 * PI.ln(), arg: 0.0 }
        * LogComplex::from_complex(periods.det_mu).powi(-4 * r)
        * phi_g(ev, table)?;
    Ok(lhs.relative_residual(rhs))
}

/// `|gamma|` from `gamma^8 = D pi^{-4g} (det mu)^4`, and the residual of the consistency relation
/// `|gamma|^{8n} = pi^{4g(r-n)} |det mu|^{-4(r-n)} |phi_g|`.
pub fn gamma_constant(periods: &Periods, ev: &ThetaEvaluator, table: &CharTable) -> Result<(f64, f64)> {
    let g = table.g as f64;
    let (r, n) = (table.r() as f64, table.n() as f64);
    let log8 = periods.curve().discriminant().norm().ln() - 4.0 * g * PI.ln() + 4.0 * periods.det_mu.norm().ln();
    let lhs = n * log8;
    let rhs = 4.0 * g * (r - n) * PI.ln() - 4.0 * (r - n) * periods.det_mu.norm().ln() + phi_g(ev, table)?.log_abs;
    Ok(((log8 / 8.0).exp(), ((lhs - rhs).exp() - 1.0).abs()))
}

/// Characteristic of the half period `u(a_k)` read off numerically.
pub fn branch_characteristic(periods: &Periods, k: usize) -> ThetaChar {
    let (top, bottom) = periods.half_period_characteristic(&periods.branch_images[k]);
    ThetaChar::new(top, bottom)
}
