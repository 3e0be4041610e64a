//! Leading coefficients at Weierstrass points: A(W), B(W) and the Wronskian in every model
//! with a Weierstrass point at infinity, against their closed forms.

use hyperarakelov::curve::Curve;
use hyperarakelov::invariants::{Context, LimitConfig, WeierstrassData};
use hyperarakelov::periods::PeriodConfig;
use hyperarakelov::theta::ThetaConfig;
use num_complex::Complex64;

fn main() -> hyperarakelov::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let curve = Curve::from_roots(vec![c(-1.1, 0.2), c(-0.6, -0.7), c(-0.1, 0.8), c(0.4, -0.5), c(0.9, 0.6), c(1.3, -0.3), c(1.8, 0.1)], None)?;
    let pcfg = PeriodConfig::default();
    let ctx = Context::new(&curve, &pcfg, ThetaConfig::default())?;
    let data = WeierstrassData::compute(&ctx, &pcfg, &LimitConfig::default())?;
    println!("genus {}, weight w = {}", ctx.genus(), ctx.weight());
    for (i, w) in data.points.iter().enumerate() {
        println!(
            "  W = {:<12} log A(W) {:>16.12} (closed {:>16.12})  log B(W) {:>16.12} (closed {:>16.12})  Wronskian {:.10}",
            format!("{w:?}"),
            data.log_a[i][i],
            data.log_a_closed[i],
            data.log_b[i],
            data.log_b_closed[i],
            data.wronskian_leading[i]
        );
    }
    let (a, b) = data.closed_form_residuals();
    println!("worst closed-form residuals: A {a:.2e}, B {b:.2e}; min extrapolation order {:.2}", data.min_order);
    println!("G'(W, W') symmetry across models: {:.2e}", data.symmetry_residual());
    Ok(())
}
