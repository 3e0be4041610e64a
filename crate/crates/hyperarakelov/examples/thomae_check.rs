//! Compute period matrices and check Thomae's formula, the discriminant identity and the
//! branch-point characteristics on a few curves.

use hyperarakelov::curve::Curve;
use hyperarakelov::periods::{PeriodConfig, Periods};
use hyperarakelov::theta::{
    branch_characteristic, disc_identity_residual, riemann_characteristic, thomae_residual, thomae_residual_for, CharTable,
    ThetaConfig, ThetaEvaluator,
};
use num_complex::Complex64;

fn monomial_curve(deg: usize, lin: f64, cst: f64) -> hyperarakelov::Result<Curve> {
    let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
    c[0] = Complex64::new(1.0, 0.0);
    c[deg - 1] = Complex64::new(lin, 0.0);
    c[deg] = Complex64::new(cst, 0.0);
    Curve::from_coefficients(&c, None)
}

fn main() -> hyperarakelov::Result<()> {
    let curves = [("x^5 - 1", monomial_curve(5, 0.0, -1.0)?), ("x^5 - x", monomial_curve(5, -1.0, 0.0)?), ("x^7 - x", monomial_curve(7, -1.0, 0.0)?)];
    for (name, curve) in curves {
        let per = Periods::compute(&curve, &PeriodConfig::default())?;
        let ev = ThetaEvaluator::new(&per.tau, ThetaConfig::default())?;
        let table = CharTable::new(curve.genus());
        let worst_t = table
            .t_family()
            .iter()
            .map(|t| thomae_residual_for(&per, &ev, &table, t))
            .fold(0.0, f64::max);
        println!("{name}: genus {}", curve.genus());
        println!("  thomae (zero char) residual  {:.3e}", thomae_residual(&per, &ev, &table));
        println!("  thomae worst over all T      {:.3e}", worst_t);
        println!("  discriminant identity        {:.3e}", disc_identity_residual(&per, &ev, &table)?);
        let matches = (0..curve.roots().len()).all(|k| branch_characteristic(&per, k) == table.etas[k]);
        println!("  branch characteristics match table: {matches}");
        let scan = riemann_characteristic(&per, &ev)?;
        println!("  riemann characteristic {} (matches eta_U: {}), runner-up {:.2e}", scan.delta, scan.matches_eta_u, scan.runner_up);
    }
    Ok(())
}
