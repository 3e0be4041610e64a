//! Period matrix of a hyperelliptic curve, its Riemann-matrix diagnostics and the Abel-Jacobi
//! map along two different routes.

use hyperarakelov::curve::{Curve, Sheet};
use hyperarakelov::periods::{AjRoute, PeriodConfig, Periods};
use num_complex::Complex64;

fn main() -> hyperarakelov::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let curve = Curve::from_roots(vec![c(-1.2, 0.3), c(-0.5, -0.8), c(0.0, 0.9), c(0.6, -0.4), c(1.1, 0.5), c(1.7, -0.2), c(2.3, 0.4)], None)?;
    let per = Periods::compute(&curve, &PeriodConfig::default())?;
    println!("genus {}, ordering {:?}", curve.genus(), curve.ordering());
    println!("tau =");
    for i in 0..curve.genus() {
        let row: Vec<String> = (0..curve.genus()).map(|j| format!("{:>22.12}", per.tau[(i, j)])).collect();
        println!("  {}", row.join(" "));
    }
    println!("det Im tau = {:.12}, |det mu| = {:.12}", per.det_y, per.det_mu.norm());
    println!("diagnostics: {:?}", per.diagnostics);

    let p = curve.point(c(0.4, 1.3), Sheet::Upper);
    let u1 = per.abel_jacobi_via(&p, AjRoute::FromInfinity)?;
    let u2 = per.abel_jacobi_via(&p, AjRoute::FromBranchPoint(2))?;
    println!("Abel-Jacobi routes differ by a lattice vector up to {:.2e}", per.lattice_residual(&(&u1 - &u2)));
    Ok(())
}
