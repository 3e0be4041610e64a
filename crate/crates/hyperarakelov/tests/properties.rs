//! Randomized properties of theta functions, periods, Green functions and the Arakelov form.

mod common;

use std::f64::consts::PI;

use common::{c, context, g3_context, generic_context, perturbed, x5m1, x5m1_context, x5mx, x7mx};
use hyperarakelov::curve::{Sheet, SurfacePoint};
use hyperarakelov::invariants::{symmetry_residual, t_closed_log, t_def, LimitConfig};
use hyperarakelov::periods::CVec;
use hyperarakelov::theta::{disc_identity_residual, thomae_residual_for, ThetaChar, ThetaConfig, ThetaEvaluator};
use num_complex::Complex64;
use proptest::prelude::*;

fn cvec(v: &[(f64, f64)]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
}

fn coord() -> impl Strategy<Value = (f64, f64)> {
    (-1.5f64..1.5, -1.0f64..1.0)
}

fn shifts(n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
}

/// A finite point with `x` in a box around the roots, kept off the branch points.
fn point(ctx: &hyperarakelov::invariants::Context, (re, im): (f64, f64), upper: bool) -> Option<SurfacePoint> {
    let x = c(re, im);
    let (_, d) = ctx.curve().distance_to_branch_points(x);
    (d > 0.1).then(|| ctx.curve().point(x, if upper { Sheet::Upper } else { Sheet::Lower }))
}

fn char_strategy(g: usize) -> impl Strategy<Value = ThetaChar> {
    (prop::collection::vec(0u8..2, g), prop::collection::vec(0u8..2, g)).prop_map(|(a, b)| ThetaChar::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn faltings_norm_is_lattice_invariant_and_even(
        z in prop::collection::vec(coord(), 2),
        m in prop::collection::vec(-2i32..=2, 2),
        n in prop::collection::vec(-2i32..=2, 2),
    ) {
        let ctx = generic_context();
        let p = &ctx.periods;
        let z = cvec(&z);
        let mv = CVec::from_iterator(2, m.iter().map(|&k| c(k as f64, 0.0)));
        let nv = CVec::from_iterator(2, n.iter().map(|&k| c(k as f64, 0.0)));
        let shifted = &z + &p.mu * mv + &p.mu_prime * nv;
        let a = ctx.log_norm(&z);
        prop_assert!((ctx.log_norm(&shifted) - a).abs() < 1e-8);
        prop_assert!((ctx.log_norm(&-&z) - a).abs() < 1e-10);
    }

    #[test]
    fn theta_is_stable_under_tighter_tolerance(w in prop::collection::vec(coord(), 3), ch in char_strategy(3), tol_exp in 4i32..11) {
        let tau = &g3_context().periods.tau;
        let tol = 10f64.powi(-tol_exp);
        let a = ThetaEvaluator::new(tau, ThetaConfig { tol, ..Default::default() }).unwrap();
        let b = ThetaEvaluator::new(tau, ThetaConfig { tol: tol / 100.0, ..Default::default() }).unwrap();
        let w = cvec(&w);
        prop_assert!((a.normalized(&ch, &w) - b.normalized(&ch, &w)).norm() < tol);
    }

    #[test]
    fn theta_quasi_periodicity(w in prop::collection::vec(coord(), 2), n in prop::collection::vec(-2i32..=2, 2), m in prop::collection::vec(-2i32..=2, 2), ch in char_strategy(2)) {
        let tau = &x5m1_context().periods.tau;
        let ev = ThetaEvaluator::new(tau, ThetaConfig::default()).unwrap();
        let w = cvec(&w);
        let nv = CVec::from_iterator(2, n.iter().map(|&k| c(k as f64, 0.0)));
        let mv = CVec::from_iterator(2, m.iter().map(|&k| c(k as f64, 0.0)));
        let shifted = &w + &mv + tau * &nv;
        // theta[a;b](w + m + tau n) = exp(2 pi i (a.m - b.n) - pi i n^T tau n - 2 pi i n^T w) theta[a;b](w)
        let (a, b) = (ch.top_f64(), ch.bottom_f64());
        let lin: f64 = (0..2).map(|i| a[i] * m[i] as f64 - b[i] * n[i] as f64).sum();
        let quad = (nv.transpose() * tau * &nv)[(0, 0)];
        let nw = (nv.transpose() * &w)[(0, 0)];
        let factor = (Complex64::new(0.0, 2.0 * PI * lin) - Complex64::new(0.0, PI) * quad - Complex64::new(0.0, 2.0 * PI) * nw).exp();
        let lhs = ev.theta(&ch, &shifted);
        let rhs = factor * ev.theta(&ch, &w);
        prop_assert!((lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
        prop_assert!((ev.normalized(&ch, &shifted).norm() - ev.normalized(&ch, &w).norm()).abs() < 1e-10);
    }

    #[test]
    fn green_function_is_symmetric(p in coord(), q in coord(), sp in any::<bool>(), sq in any::<bool>()) {
        let ctx = generic_context();
        let (Some(p), Some(q)) = (point(ctx, p, sp), point(ctx, q, sq)) else { return Ok(()) };
        prop_assume!(p != q);
        prop_assert!(symmetry_residual(ctx, &p, &q).unwrap() < 1e-8);
    }

    #[test]
    fn arakelov_density_is_consistent_between_charts(r in 0.05f64..0.5, phi in 0.0f64..(2.0 * PI)) {
        let ctx = generic_context();
        let t = Complex64::from_polar(r, phi);
        let dt = ctx.density_t(t);
        prop_assert!((ctx.density_t(-t) - dt).abs() <= 1e-12 * dt);
        // dA(x) = 4 |t|^{-6} dA(t) under x = c + t^{-2}
        let x = ctx.periods.center + t.powi(-2);
        let dx = ctx.density_x(x) * 4.0 * r.powi(-6);
        prop_assert!((dx / dt - 1.0).abs() < 1e-10, "{dx} vs {dt}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn t_definition_matches_closed_form(p in coord(), upper in any::<bool>()) {
        let ctx = generic_context();
        let Some(p) = point(ctx, p, upper) else { return Ok(()) };
        let t = t_def(ctx, &p, &LimitConfig::default()).unwrap();
        let closed = t_closed_log(ctx.log_phi, 2);
        prop_assert!((t.log_value - closed).abs() < 1e-3, "{} vs {closed}", t.log_value);
    }

    #[test]
    fn thomae_and_disc_on_perturbed_curves(s5 in shifts(5), s7 in shifts(7), scale in 0.02f64..0.2) {
        for curve in [perturbed(&x5m1(), &s5, scale), perturbed(&x5mx(), &s5, scale), perturbed(&x7mx(), &s7, scale)] {
            let ctx = context(&curve);
            let worst = ctx.table.t_family().iter().map(|t| thomae_residual_for(&ctx.periods, &ctx.theta, &ctx.table, t)).fold(0.0, f64::max);
            prop_assert!(worst < 1e-6, "thomae {worst}");
            let disc = disc_identity_residual(&ctx.periods, &ctx.theta, &ctx.table).unwrap();
            prop_assert!(disc < 1e-6, "disc {disc}");
        }
    }
}
