//! Full invariant report for a curve: S(X), T(X), ||phi_g||, delta(X) and every residual.
//!
//! Usage: `cargo run --release --example faltings_delta [-- x5m1|generic|x5mx]`

use std::time::Instant;

use hyperarakelov::curve::Curve;
use hyperarakelov::invariants::{invariant_report, Context, ReportConfig};
use num_complex::Complex64;

fn curve(name: &str) -> hyperarakelov::Result<Curve> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    match name {
        "x5mx" => Curve::from_coefficients(&[c(1., 0.), z, z, z, c(-1., 0.), z], None),
        "generic" => Curve::from_roots(vec![c(-1.3, 0.2), c(-0.4, -0.9), c(0.1, 0.6), c(0.9, -0.3), c(1.6, 0.4)], None),
        _ => Curve::from_coefficients(&[c(1., 0.), z, z, z, z, c(-1., 0.)], None),
    }
}

fn main() -> hyperarakelov::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "x5m1".into());
    let cfg = ReportConfig::default();
    let start = Instant::now();
    let ctx = Context::new(&curve(&name)?, &cfg.period, cfg.theta)?;
    let report = invariant_report(&ctx, &cfg)?;
    let v = report.to_json();
    println!("curve {name}, genus {}", report.genus);
    println!("  log ||phi_g||      {}", v["invariants"]["petersson_phi"]["log_value"]);
    println!("  log S(X)           {}", v["invariants"]["s"]["estimate"]["log_value"]);
    println!("  log T(X) def       {}", v["invariants"]["t_definition"]["estimate"]["log_value"]);
    println!("  log T(X) closed    {}", v["invariants"]["t_closed"]["log_value"]);
    println!("  delta (closed)     {}", v["invariants"]["delta"]["via_closed_formula"]["value"]);
    println!("  delta (via T)      {}", v["invariants"]["delta"]["via_t_definition"]["value"]);
    println!("residuals:");
    for (k, r) in &report.residuals {
        println!("  {:<36} {:>12.3e}  tol {:>8.1e}  {}", k, r.value, r.tolerance, if r.pass { "ok" } else { "FAIL" });
    }
    println!("all pass: {}  ({:.1}s)", report.pass(), start.elapsed().as_secs_f64());
    Ok(())
}
