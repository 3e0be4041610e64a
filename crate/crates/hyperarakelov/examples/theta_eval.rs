//! Riemann theta functions with characteristics at a period matrix: the value, the odd
//! vanishing, quasi-periodicity and Faltings' norm.

use hyperarakelov::curve::Curve;
use hyperarakelov::periods::{CVec, PeriodConfig, Periods};
use hyperarakelov::theta::{riemann_characteristic, FaltingsNorm, ThetaChar, ThetaConfig, ThetaEvaluator};
use num_complex::Complex64;

fn main() -> hyperarakelov::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z0 = c(0.0, 0.0);
    let curve = Curve::from_coefficients(&[c(1., 0.), z0, z0, z0, c(-1., 0.), z0], None)?;
    let per = Periods::compute(&curve, &PeriodConfig::default())?;
    let ev = ThetaEvaluator::new(&per.tau, ThetaConfig::default())?;
    println!("y^2 = x^5 - x, tail bound {:.1e}", ev.tail_bound);

    let w = CVec::from_vec(vec![c(0.13, 0.07), c(-0.21, 0.11)]);
    for ch in ThetaChar::all(2) {
        let at_zero = ev.theta(&ch, &CVec::zeros(2));
        println!("  theta{ch}: at w {:>40.12}  at 0 {:>10.3e}  ({})", ev.theta(&ch, &w), at_zero.norm(), if ch.is_even() { "even" } else { "odd" });
    }

    // theta(w + tau e_1) = exp(-pi i tau_11 - 2 pi i w_1) theta(w)
    let zero = ThetaChar::zero(2);
    let shifted = &w + per.tau.column(0);
    let factor = (Complex64::i() * std::f64::consts::PI * (-per.tau[(0, 0)] - 2.0 * w[0])).exp();
    let lhs = ev.theta(&zero, &shifted);
    println!("quasi-periodicity residual {:.2e}", (lhs - factor * ev.theta(&zero, &w)).norm() / lhs.norm());

    let scan = riemann_characteristic(&per, &ev)?;
    let norm = FaltingsNorm::new(&per, scan.delta.clone());
    let z = &per.mu * &w;
    println!("Riemann characteristic {}, ||theta||(z) = {:.12}", scan.delta, norm.eval(&per, &ev, &z));
    println!("evenness ||theta||(-z) - ||theta||(z) = {:.2e}", norm.eval(&per, &ev, &-z.clone()) - norm.eval(&per, &ev, &z));
    Ok(())
}
