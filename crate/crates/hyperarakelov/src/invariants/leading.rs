//! Leading coefficients of theta functions and Wronskians restricted to the curve:
//! `||F_z||(P)`, `A(W')` and `B(W)`.
//!
//! Each limit is sampled along `h_j = h_0 2^{-j} e^{i angle}` and extrapolated. In series mode the
//! theta factor is replaced by its Taylor expansion from a Cauchy integral with the coefficients
//! below the vanishing order dropped, so no cancellation occurs at small `h`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::wronskian::wronskian_zg;
use super::Context;
use crate::curve::{psqrt, SurfacePoint, Weierstrass};
use crate::error::{Error, Result};
use crate::numeric::limits::{cauchy_coefficients, horner, richardson, LimitEstimate};
use crate::numeric::quad::gauss_legendre;
use crate::periods::CVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitMode {
    /// Cauchy-Taylor coefficients with the known zero coefficients removed.
    Series,
    /// The quotient evaluated directly at every step.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitConfig {
    pub h0: f64,
    pub levels: usize,
    pub cauchy_points: usize,
    /// Number of Taylor coefficients kept beyond the vanishing order.
    pub extra_terms: usize,
    /// Direction of approach.
    pub angle: f64,
    pub mode: LimitMode,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { h0: 0.1, levels: 9, cauchy_points: 64, extra_terms: 24, angle: 0.37, mode: LimitMode::Series }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingLimit {
    pub limit: LimitEstimate,
    /// Vanishing order divided out.
    pub vanishing_order: usize,
    /// Largest dropped Taylor term relative to the largest kept one, on the Cauchy circle.
    pub vanishing_residual: f64,
}

impl LeadingLimit {
    pub fn value(&self) -> f64 {
        self.limit.value
    }

    pub fn log_value(&self) -> f64 {
        self.limit.value.ln()
    }

    pub fn relative_error(&self) -> f64 {
        self.limit.error / self.limit.value.abs()
    }
}

/// Samples `(h_j, value_j)` plus the vanishing diagnostics of the theta factor.
struct ThetaSeries {
    coeffs: Vec<Complex64>,
    residual: f64,
}

fn theta_series<W: Fn(Complex64) -> Result<CVec>>(ctx: &Context, w: &W, rho: f64, n: usize, cfg: &LimitConfig) -> Result<ThetaSeries> {
    let k_max = n + cfg.extra_terms;
    let failed = std::cell::Cell::new(None);
    let coeffs = cauchy_coefficients(
        |h| match w(h) {
            Ok(wh) => ctx.theta.theta(&ctx.norm.delta, &wh),
            Err(e) => {
                failed.set(Some(e.to_string()));
                Complex64::new(f64::NAN, 0.0)
            }
        },
        rho,
        cfg.cauchy_points,
        k_max,
    );
    if let Some(msg) = failed.take() {
        return Err(Error::Limit(msg));
    }
    let scaled: Vec<f64> = coeffs.iter().enumerate().map(|(k, c)| c.norm() * rho.powi(k as i32)).collect();
    let kept = scaled[n..].iter().cloned().fold(0.0, f64::max);
    let dropped = scaled[..n].iter().cloned().fold(0.0, f64::max);
    if kept == 0.0 || !kept.is_finite() {
        return Err(Error::Limit("theta restricted to the curve has no leading coefficient".into()));
    }
    Ok(ThetaSeries { coeffs: coeffs[n..].to_vec(), residual: dropped / kept })
}

fn steps(cfg: &LimitConfig, h0: f64) -> Vec<Complex64> {
    (0..cfg.levels).map(|j| Complex64::from_polar(h0 / 2f64.powi(j as i32), cfg.angle)).collect()
}

/// Theta factor `||theta|| / |h|^n` at `w(h)`, by series or directly.
fn theta_samples<W: Fn(Complex64) -> Result<CVec>>(
    ctx: &Context,
    w: &W,
    hs: &[Complex64],
    n: usize,
    series: Option<&ThetaSeries>,
) -> Result<Vec<f64>> {
    let q = ctx.norm.quarter_log_det_y();
    hs.iter()
        .map(|&h| {
            let wh = w(h)?;
            Ok(match series {
                Some(s) => (q - ctx.theta.gaussian_exponent(&wh)).exp() * horner(&s.coeffs, h).norm(),
                None => (q + ctx.theta.normalized(&ctx.norm.delta, &wh).norm().ln() - n as f64 * h.norm().ln()).exp(),
            })
        })
        .collect()
}

/// `||F_z||(P) = lim_{Q -> P} ||theta||(gP - Q) / |z(P) - z(Q)|^g` at a finite non-Weierstrass
/// point, in the coordinate `z = scale * x`.
pub fn f_norm(ctx: &Context, p: &SurfacePoint, scale: Complex64, cfg: &LimitConfig) -> Result<LeadingLimit> {
    let SurfacePoint::Finite { x, y } = *p else { return Err(Error::WeierstrassPoint) };
    let g = ctx.genus();
    let curve = ctx.curve();
    let (_, dist) = curve.distance_to_branch_points(x);
    if dist < 1e-3 * (1.0 + curve.max_root_norm()) {
        return Err(Error::WeierstrassPoint);
    }
    let u = ctx.abel_jacobi(p)?;
    let base = &u * Complex64::new((g - 1) as f64, 0.0);
    let roots = curve.roots().to_vec();
    let (nodes, weights) = gauss_legendre(32);
    // u(Q_h) - u(P) along the segment [x, x + h], y continued from P
    let increment = |h: Complex64| -> CVec {
        let mut acc = CVec::zeros(g);
        for (s, wt) in nodes.iter().zip(&weights) {
            let xi = x + h * (0.5 * (s + 1.0));
            let yi = y * roots.iter().map(|&a| psqrt((xi - a) / (x - a))).product::<Complex64>();
            let mut pw = Complex64::new(0.5 * wt, 0.0) / yi;
            for k in 0..g {
                acc[k] += pw;
                pw *= xi;
            }
        }
        acc * (h * 0.5)
    };
    let w = |h: Complex64| -> Result<CVec> { Ok(ctx.periods.normalize(&(&base - increment(h)))) };
    let rho = 0.5 * dist;
    let h0 = cfg.h0.min(0.5 * rho);
    let hs = steps(cfg, h0);
    let (series, residual) = match cfg.mode {
        LimitMode::Series => {
            let s = theta_series(ctx, &w, rho, g, cfg)?;
            let r = s.residual;
            (Some(s), r)
        }
        LimitMode::Direct => (None, 0.0),
    };
    let vals = theta_samples(ctx, &w, &hs, g, series.as_ref())?;
    let factor = scale.norm().powi(-(g as i32));
    let vals: Vec<f64> = vals.iter().map(|v| v * factor).collect();
    let radii: Vec<f64> = hs.iter().map(|h| h.norm()).collect();
    Ok(LeadingLimit { limit: richardson(&radii, &vals, 1), vanishing_order: g, vanishing_residual: residual })
}

/// Radius of analyticity in `t` of the chart `x = t^{-2}` at infinity.
fn infinity_radius(ctx: &Context) -> f64 {
    ctx.curve().roots().iter().filter(|a| a.norm() > 0.0).map(|a| a.norm().powf(-0.5)).fold(f64::INFINITY, f64::min)
}

/// `A(W') = lim_{Q -> infinity} ||theta||(gQ - W') / |z_g(Q)|^N` in this model, with
/// `N = w = g(g-1)/2` for finite `W'` and `N = w + g` for `W' = infinity`. The orders add up to
/// `(2g+1) w + w + g = g^3`, the degree of the pulled back theta divisor.
pub fn leading_a(ctx: &Context, target: Weierstrass, cfg: &LimitConfig) -> Result<LeadingLimit> {
    let g = ctx.genus();
    let n = match target {
        Weierstrass::Infinity => ctx.curve().weierstrass_weight() + g,
        Weierstrass::Finite(_) => ctx.curve().weierstrass_weight(),
    };
    let uw = ctx.periods.branch_image(target);
    let zero = Complex64::new(0.0, 0.0);
    let w = |t: Complex64| -> Result<CVec> {
        let z = ctx.periods.z_infinity(t, zero)?;
        Ok(ctx.periods.normalize(&(z * Complex64::new(g as f64, 0.0) - &uw)))
    };
    let rho = 0.5 * infinity_radius(ctx).min(2.0);
    let h0 = cfg.h0.min(0.5 * rho);
    let ts = steps(cfg, h0);
    let (series, residual) = match cfg.mode {
        LimitMode::Series => {
            let s = theta_series(ctx, &w, rho, n, cfg)?;
            let r = s.residual;
            (Some(s), r)
        }
        LimitMode::Direct => (None, 0.0),
    };
    let vals = theta_samples(ctx, &w, &ts, n, series.as_ref())?;
    // convert |t|^N to |z_g|^N
    let mut out = Vec::with_capacity(vals.len());
    for (v, &t) in vals.iter().zip(&ts) {
        let zg = ctx.periods.z_infinity(t, zero)?[g - 1];
        out.push(v * (t.norm() / zg.norm()).powi(n as i32));
    }
    let radii: Vec<f64> = ts.iter().map(|t| t.norm()).collect();
    Ok(LeadingLimit { limit: richardson(&radii, &out, 1), vanishing_order: n, vanishing_residual: residual })
}

/// `B(W) = lim_{Q -> infinity} |W_{z_g}(omega)(Q)| / |z_g|^w` for an orthonormal basis `omega`.
/// Also returns the same limit for the basis `mu` itself.
pub fn leading_b(ctx: &Context, cfg: &LimitConfig) -> Result<(LeadingLimit, LeadingLimit)> {
    let g = ctx.genus();
    let wgt = ctx.curve().weierstrass_weight() as i32;
    let zero = Complex64::new(0.0, 0.0);
    let rho = 0.5 * infinity_radius(ctx).min(2.0);
    let h0 = cfg.h0.min(0.5 * rho);
    let ts = steps(cfg, h0);
    let mut raw = Vec::with_capacity(ts.len());
    for &t in &ts {
        let SurfacePoint::Finite { x, y } = ctx.periods.point_at_t(t, zero) else { unreachable!() };
        let zg = ctx.periods.z_infinity(t, zero)?[g - 1];
        raw.push(wronskian_zg(ctx.curve(), x, y).norm() / zg.norm().powi(wgt));
    }
    let radii: Vec<f64> = ts.iter().map(|t| t.norm()).collect();
    let ortho = (-0.5 * ctx.log_hodge_norm()).exp();
    let scaled: Vec<f64> = raw.iter().map(|v| v * ortho).collect();
    Ok((
        LeadingLimit { limit: richardson(&radii, &scaled, 1), vanishing_order: wgt as usize, vanishing_residual: 0.0 },
        LeadingLimit { limit: richardson(&radii, &raw, 1), vanishing_order: wgt as usize, vanishing_residual: 0.0 },
    ))
}

/// `log A(W)` for `W` at infinity from the closed form
/// `2^{g(g-1)/2} pi^{g(r-n)/2n} (det Y)^{1/4} |det mu|^{-(r-n)/2n} |phi_g(tau)|^{1/8n}`.
pub fn leading_a_closed(ctx: &Context) -> f64 {
    let g = ctx.genus() as f64;
    let (n, r) = (ctx.table.n() as f64, ctx.table.r() as f64);
    let log_det_y = ctx.periods.det_y.ln();
    let log_phi_abs = ctx.log_phi - 2.0 * r * log_det_y;
    ctx.weight() * 2f64.ln() + g * (r - n) / (2.0 * n) * PI.ln() + 0.25 * log_det_y
        - (r - n) / (2.0 * n) * ctx.periods.det_mu.norm().ln()
        + log_phi_abs / (8.0 * n)
}

/// `log B(W) = log(2^{g(g-1)/2} (det Y)^{-1/2} |det mu|^{-1})`.
pub fn leading_b_closed(ctx: &Context) -> f64 {
    ctx.weight() * 2f64.ln() - 0.5 * ctx.log_hodge_norm()
}

#[cfg(test)]
mod tests {
    use super::super::tests::generic_g2;
    use super::*;
    use crate::curve::{Curve, Sheet};
    use crate::periods::PeriodConfig;
    use crate::theta::ThetaConfig;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quintic() -> Context {
        let cv = Curve::from_coefficients(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)], None).unwrap();
        Context::new(&cv, &PeriodConfig::default(), ThetaConfig::default()).unwrap()
    }

    #[test]
    fn a_at_infinity_matches_closed_form() {
        for ctx in [quintic(), generic_g2()] {
            let a = leading_a(&ctx, Weierstrass::Infinity, &LimitConfig::default()).unwrap();
            let closed = leading_a_closed(&ctx);
            assert!((a.log_value() - closed).abs() < 1e-6, "{} vs {closed}: {a:?}", a.log_value());
            assert!(a.limit.order_at_least(0.8));
            assert!(a.vanishing_residual < 1e-8, "{a:?}");
        }
    }

    #[test]
    fn b_matches_closed_form_and_wronskian_leading_term() {
        let ctx = generic_g2();
        let (b, raw) = leading_b(&ctx, &LimitConfig::default()).unwrap();
        assert!((b.log_value() - leading_b_closed(&ctx)).abs() < 1e-6, "{b:?}");
        assert!((raw.value() - 2.0).abs() < 1e-6, "{raw:?}");
    }

    #[test]
    fn quintic_symmetry_makes_finite_a_equal() {
        let ctx = quintic();
        let vals: Vec<f64> = (0..5).map(|k| leading_a(&ctx, Weierstrass::Finite(k), &LimitConfig::default()).unwrap().value()).collect();
        for v in &vals {
            assert!((v / vals[0] - 1.0).abs() < 1e-6, "{vals:?}");
        }
    }

    #[test]
    fn two_rays_and_direct_mode_agree() {
        let ctx = generic_g2();
        let base = LimitConfig::default();
        let a = leading_a(&ctx, Weierstrass::Finite(2), &base).unwrap().value();
        let b = leading_a(&ctx, Weierstrass::Finite(2), &LimitConfig { angle: 2.1, ..base }).unwrap().value();
        assert!((a / b - 1.0).abs() < 1e-6, "{a} vs {b}");
        let p = ctx.curve().point(c(0.35, -1.2), Sheet::Lower);
        let s = f_norm(&ctx, &p, c(1.0, 0.0), &base).unwrap();
        let d = f_norm(&ctx, &p, c(1.0, 0.0), &LimitConfig { mode: LimitMode::Direct, ..base }).unwrap();
        assert!((s.value() / d.value() - 1.0).abs() < 1e-5, "{s:?} {d:?}");
    }

    #[test]
    fn f_norm_coordinate_covariance() {
        let ctx = generic_g2();
        let p = ctx.curve().point(c(-0.6, 1.3), Sheet::Upper);
        let cfg = LimitConfig::default();
        let a = f_norm(&ctx, &p, c(1.0, 0.0), &cfg).unwrap().value();
        let b = f_norm(&ctx, &p, c(2.0, 0.0), &cfg).unwrap().value();
        assert!((b * 4.0 / a - 1.0).abs() < 1e-12);
        assert!(a > 0.0);
    }
}
