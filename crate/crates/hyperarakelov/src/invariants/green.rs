//! `S(X)` and the Arakelov-Green function
//! `G(P,Q)^g = S^{1/g^2} ||theta||(gP - Q) / prod_W ||theta||(gP - W)^{w/g^3}`.

use num_complex::Complex64;
use serde::Serialize;

use super::measure::{integrate_surface, QuadConfig, SurfaceIntegral};
use super::Context;
use crate::curve::SurfacePoint;
use crate::error::{Error, Result};
use crate::periods::CVec;

#[derive(Clone, Debug, Serialize)]
pub struct SEstimate {
    pub log_s: f64,
    pub error: f64,
    pub integral: SurfaceIntegral,
}

fn excluded_x(p: &SurfacePoint) -> Vec<Complex64> {
    match *p {
        SurfacePoint::Finite { x, .. } => vec![x],
        SurfacePoint::Infinity => Vec::new(),
    }
}

fn scaled(u: &CVec, k: f64) -> CVec {
    u * Complex64::new(k, 0.0)
}

/// `log S(X) = -int_X log ||theta||(gP - Q) mu(P)`.
pub fn log_s(ctx: &Context, q: &SurfacePoint, cfg: &QuadConfig) -> Result<SEstimate> {
    let g = ctx.genus() as f64;
    let uq = ctx.abel_jacobi(q)?;
    let integral = integrate_surface(ctx, cfg, &excluded_x(q), |u| ctx.log_norm(&(scaled(u, g) - &uq)));
    if !integral.value.is_finite() {
        return Err(Error::Quadrature("non-finite value in the S(X) integral".into()));
    }
    if !integral.converged {
        return Err(Error::Budget { evals: integral.evaluations, err: integral.error });
    }
    Ok(SEstimate { log_s: -integral.value, error: integral.error, integral })
}

fn non_weierstrass(ctx: &Context, p: &SurfacePoint) -> Result<()> {
    match *p {
        SurfacePoint::Infinity => Err(Error::WeierstrassPoint),
        SurfacePoint::Finite { x, .. } => {
            let (_, d) = ctx.curve().distance_to_branch_points(x);
            if d == 0.0 {
                Err(Error::WeierstrassPoint)
            } else {
                Ok(())
            }
        }
    }
}

/// The part of `g log G(P, .)` that depends on `P` only: `(1/g^2) log S - (w/g^3) sum_W log ||theta||(gP - W)`.
fn p_part(ctx: &Context, log_s: f64, up: &CVec) -> f64 {
    let g = ctx.genus() as f64;
    log_s / (g * g) - ctx.weight() / g.powi(3) * ctx.weierstrass_log_sum(&scaled(up, g))
}

/// `log G(P, Q)`; `P` must not be a Weierstrass point. Returns `-inf` for `P = Q`.
pub fn log_green(ctx: &Context, log_s: f64, p: &SurfacePoint, q: &SurfacePoint) -> Result<f64> {
    non_weierstrass(ctx, p)?;
    if p == q {
        return Ok(f64::NEG_INFINITY);
    }
    let g = ctx.genus() as f64;
    let up = ctx.abel_jacobi(p)?;
    let uq = ctx.abel_jacobi(q)?;
    Ok((p_part(ctx, log_s, &up) + ctx.log_norm(&(scaled(&up, g) - uq))) / g)
}

/// `log G'(P, Q) = log G(P, Q) - (1/g^3) log S`.
pub fn log_green_prime(log_g: f64, log_s: f64, g: usize) -> f64 {
    log_g - log_s / (g as f64).powi(3)
}

/// `|log G(P,Q) - log G(Q,P)|`; independent of `S`.
pub fn symmetry_residual(ctx: &Context, p: &SurfacePoint, q: &SurfacePoint) -> Result<f64> {
    Ok((log_green(ctx, 0.0, p, q)? - log_green(ctx, 0.0, q, p)?).abs())
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenNormalization {
    /// `int_X log G(P, Q) mu(Q)`.
    pub value: f64,
    pub error: f64,
    pub integral: SurfaceIntegral,
}

/// `int_X log G(P, Q) mu(Q)` at fixed `P`, which vanishes for the Arakelov-Green function.
pub fn green_normalization(ctx: &Context, s: &SEstimate, p: &SurfacePoint, cfg: &QuadConfig) -> Result<GreenNormalization> {
    non_weierstrass(ctx, p)?;
    let g = ctx.genus() as f64;
    let up = ctx.abel_jacobi(p)?;
    let gp = scaled(&up, g);
    let integral = integrate_surface(ctx, cfg, &excluded_x(p), |u| ctx.log_norm(&(&gp - u)));
    if !integral.value.is_finite() {
        return Err(Error::Quadrature("non-finite value in the normalization integral".into()));
    }
    let value = (p_part(ctx, s.log_s, &up) + integral.value) / g;
    Ok(GreenNormalization { value, error: (integral.error + s.error / (g * g)) / g, integral })
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
    fn green_vanishes_on_the_diagonal_only() {
        let ctx = generic_g2();
        let p = ctx.curve().point(c(0.3, 1.4), Sheet::Upper);
        assert_eq!(log_green(&ctx, 0.0, &p, &p).unwrap(), f64::NEG_INFINITY);
        let q = ctx.curve().point(c(0.3, 1.4), Sheet::Lower);
        assert!(log_green(&ctx, 0.0, &p, &q).unwrap().is_finite());
        assert!(matches!(log_green(&ctx, 0.0, &SurfacePoint::Infinity, &q), Err(Error::WeierstrassPoint)));
    }

    #[test]
    fn green_is_symmetric() {
        let ctx = generic_g2();
        let pts = [
            ctx.curve().point(c(0.3, 1.4), Sheet::Upper),
            ctx.curve().point(c(-1.1, -0.8), Sheet::Lower),
            ctx.curve().point(c(2.4, 0.2), Sheet::Upper),
        ];
        for p in &pts {
            for q in &pts {
                if p != q {
                    assert!(symmetry_residual(&ctx, p, q).unwrap() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn green_prime_scaling() {
        assert_eq!(log_green_prime(1.25, 0.0, 2), 1.25);
        assert!((log_green_prime(1.25, 0.8, 2) - (1.25 - 0.1)).abs() < 1e-15);
    }
}
