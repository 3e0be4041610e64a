//! S(X), the Arakelov-Green function and its defining properties on a genus-two curve.

use hyperarakelov::curve::{Curve, Sheet, SurfacePoint};
use hyperarakelov::invariants::{green_normalization, integrate_surface, log_green, log_s, Context, QuadConfig};
use hyperarakelov::periods::PeriodConfig;
use hyperarakelov::theta::ThetaConfig;
use num_complex::Complex64;

fn main() -> hyperarakelov::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let curve = Curve::from_roots(vec![c(-1.3, 0.2), c(-0.4, -0.9), c(0.1, 0.6), c(0.9, -0.3), c(1.6, 0.4)], None)?;
    let ctx = Context::new(&curve, &PeriodConfig::default(), ThetaConfig::default())?;
    let qcfg = QuadConfig { tol: 1e-4, ..Default::default() };

    let mass = integrate_surface(&ctx, &qcfg, &[], |_| 1.0);
    println!("mass of the Arakelov form: {:.8} ({} evaluations)", mass.value, mass.evaluations);

    let q2 = curve.point(c(0.5, -1.1), Sheet::Lower);
    let s1 = log_s(&ctx, &SurfacePoint::Infinity, &qcfg)?;
    let s2 = log_s(&ctx, &q2, &qcfg)?;
    println!("log S(X) with Q = infinity {:.8}, with Q finite {:.8}", s1.log_s, s2.log_s);

    let p = curve.point(c(0.3, 1.4), Sheet::Upper);
    let q = curve.point(c(-1.1, -0.8), Sheet::Lower);
    let pq = log_green(&ctx, s1.log_s, &p, &q)?;
    let qp = log_green(&ctx, s1.log_s, &q, &p)?;
    println!("log G(P,Q) = {pq:.12}, log G(Q,P) = {qp:.12}");
    let norm = green_normalization(&ctx, &s1, &p, &qcfg)?;
    println!("int log G(P, .) mu = {:.2e} (error estimate {:.1e})", norm.value, norm.error);
    Ok(())
}
