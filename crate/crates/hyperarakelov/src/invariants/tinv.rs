//! The invariant `T(X)`, the modified discriminant `||Delta_g||` and Faltings' delta invariant.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::leading::{f_norm, LeadingLimit, LimitConfig};
use super::wronskian::wronskian_x;
use super::{binomials, Context};
use crate::curve::SurfacePoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct TEstimate {
    pub log_value: f64,
    /// Error estimate of `log T`.
    pub error: f64,
    pub log_f_norm: f64,
    pub log_wronskian: f64,
    pub log_weierstrass_sum: f64,
    pub f_norm: LeadingLimit,
}

/// `T(X) = ||F_x||(P)^{-(g+1)} prod_W ||theta||(gP - W)^{(g-1)/g^3} |W_x(omega)(P)|^2`, Weierstrass
/// points counted with weight `g(g-1)/2`.
pub fn t_def(ctx: &Context, p: &SurfacePoint, cfg: &LimitConfig) -> Result<TEstimate> {
    let SurfacePoint::Finite { x, y } = *p else { return Err(Error::WeierstrassPoint) };
    let g = ctx.genus() as f64;
    let fz = f_norm(ctx, p, Complex64::new(1.0, 0.0), cfg)?;
    let u = ctx.abel_jacobi(p)?;
    let wsum = ctx.weierstrass_log_sum(&(u * Complex64::new(g, 0.0)));
    let log_w = wronskian_x(ctx.curve(), x, y).norm().ln() - 0.5 * ctx.log_hodge_norm();
    let log_f = fz.log_value();
    let log_value = -(g + 1.0) * log_f + (g - 1.0) * ctx.weight() / g.powi(3) * wsum + 2.0 * log_w;
    Ok(TEstimate {
        log_value,
        error: (g + 1.0) * fz.relative_error() + ctx.theta.cfg.tol,
        log_f_norm: log_f,
        log_wronskian: log_w,
        log_weierstrass_sum: wsum,
        f_norm: fz,
    })
}

/// `log ||Delta_g|| = log ||phi_g|| - (4g+4) n log 2`.
pub fn delta_norm_log(log_phi: f64, g: usize) -> f64 {
    let (n, _, _) = binomials(g);
    log_phi - (4 * g + 4) as f64 * n as f64 * 2f64.ln()
}

/// `log T = -2g log(2 pi) - (3g-1)/(8ng) log ||Delta_g||`.
pub fn t_closed_log(log_phi: f64, g: usize) -> f64 {
    let (n, _, _) = binomials(g);
    let gf = g as f64;
    -2.0 * gf * (2.0 * PI).ln() - (3.0 * gf - 1.0) / (8.0 * n as f64 * gf) * delta_norm_log(log_phi, g)
}

/// `delta = 4 (log T - (g-1)/g^2 log S)`.
pub fn delta_from_t(log_t: f64, log_s: f64, g: usize) -> f64 {
    let gf = g as f64;
    4.0 * (log_t - (gf - 1.0) / (gf * gf) * log_s)
}

/// `delta = 4 (-2g log 2 pi - (g-1)/g^2 log S - (3g-1)/(8ng) log ||Delta_g||)`.
pub fn delta_corollary(log_s: f64, log_phi: f64, g: usize) -> f64 {
    delta_from_t(t_closed_log(log_phi, g), log_s, g)
}

#[cfg(test)]
mod tests {
    use super::super::tests::generic_g2;
    use super::*;
    use crate::curve::Sheet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_discriminant_gives_bare_constant() {
        for g in 2..5 {
            let (n, _, _) = binomials(g);
            let log_phi = (4 * g + 4) as f64 * n as f64 * 2f64.ln();
            assert!(delta_norm_log(log_phi, g).abs() < 1e-12);
            assert!((t_closed_log(log_phi, g) + 2.0 * g as f64 * (2.0 * PI).ln()).abs() < 1e-12);
        }
        // g = 2: exponent -(3g-1)/(8ng) = -5/64
        let d = t_closed_log(1.0, 2) - t_closed_log(0.0, 2);
        assert!((d + 5.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn t_by_definition_matches_closed_form_at_several_points() {
        let ctx = generic_g2();
        let closed = t_closed_log(ctx.log_phi, 2);
        let cfg = LimitConfig::default();
        for (x, sheet) in [(c(0.35, -1.2), Sheet::Lower), (c(-0.6, 1.3), Sheet::Upper), (c(2.2, 0.9), Sheet::Upper)] {
            let t = t_def(&ctx, &ctx.curve().point(x, sheet), &cfg).unwrap();
            assert!((t.log_value - closed).abs() < 1e-6, "{} vs {closed}", t.log_value);
        }
    }
}
