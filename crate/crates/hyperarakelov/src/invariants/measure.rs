//! Integration against the Arakelov form over the whole surface.
//!
//! The surface is covered by one chart at infinity, `x = c + t^{-2}` on `|t| < r_inf^{-1/2}`,
//! and by polar charts `x = a_j + s^2 rho(theta) e^{i theta}` around each branch point on the
//! disc `|x - c| <= r_inf`, blended by the partition of unity `|x - a_j|^{-4} / sum_k |x - a_k|^{-4}`.
//! The substitution `s^2` makes the integrand smooth in the local uniformizer at `a_j`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{powers, Context};
use crate::curve::psqrt;
use crate::numeric::cubature::{adaptive_2d_cells, grid, Rect};
use crate::periods::{CMat, CVec, Periods};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadMethod {
    /// Adaptive Genz-Malik cells in every chart.
    Adaptive,
    /// Uniform samples in every chart from a seeded ChaCha stream.
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub method: QuadMethod,
    /// Target absolute error of the integral (for log-scale quantities, the relative error).
    pub tol: f64,
    /// Integrand evaluations across all charts.
    pub budget: usize,
    pub seed: u64,
    /// Points closer than this to a branch point or an excluded point contribute nothing;
    /// at infinity the condition is `|t| < exclusion_radius`.
    pub exclusion_radius: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { method: QuadMethod::Adaptive, tol: 1e-3, budget: 4_000_000, seed: 0, exclusion_radius: 0.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceIntegral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Per-chart values, infinity first.
    pub charts: Vec<f64>,
}

/// Gram matrix `(i/2) int mu_k ^ conj(mu_l)` from Riemann's bilinear relation
/// `(i/2) sum_j (A_j(mu_k) conj(B_j(mu_l)) - B_j(mu_k) conj(A_j(mu_l)))`.
pub fn gram_from_bilinear(p: &Periods) -> CMat {
    let i2 = Complex64::new(0.0, 0.5);
    (&p.mu * p.mu_prime.adjoint() - &p.mu_prime * p.mu.adjoint()) * i2
}

/// Uniform initial cells per chart, in the radial and angular directions.
const BASE_GRID: (usize, usize) = (3, 8);

enum Chart {
    Infinity { s_max: f64 },
    Branch { j: usize },
}

/// `int_X F(u(P)) mu(P)` where `u` is the Abel-Jacobi image. `F` is called with both `u` and `-u`
/// (the two sheets over one point of a chart) and must be invariant under the period lattice.
pub fn integrate_surface<F>(ctx: &Context, cfg: &QuadConfig, excluded: &[Complex64], f: F) -> SurfaceIntegral
where
    F: Fn(&CVec) -> f64 + Sync,
{
    let n_roots = ctx.curve().roots().len();
    let s_max = ctx.periods.r_inf.powf(-0.5);
    let mut charts = vec![Chart::Infinity { s_max }];
    charts.extend((0..n_roots).map(|j| Chart::Branch { j }));
    let nc = charts.len();
    let tol = cfg.tol / nc as f64;
    let budget = (cfg.budget / nc).max(17);
    let f = &f;
    let results: Vec<(f64, f64, usize, bool)> = charts
        .par_iter()
        .enumerate()
        .map(|(idx, chart)| {
            let (rect, h): (Rect, Box<dyn Fn(f64, f64) -> f64 + Sync>) = match *chart {
                Chart::Infinity { s_max } => (
                    Rect { x0: 0.0, x1: s_max, y0: 0.0, y1: 2.0 * PI },
                    Box::new(move |s, phi| infinity_integrand(ctx, cfg, f, s, phi)),
                ),
                Chart::Branch { j } => (
                    Rect { x0: 0.0, x1: 1.0, y0: 0.0, y1: 2.0 * PI },
                    Box::new(move |s, th| branch_integrand(ctx, cfg, excluded, f, j, s, th)),
                ),
            };
            match cfg.method {
                QuadMethod::Adaptive => {
                    let cells = initial_cells(ctx, chart, rect, excluded);
                    let r = adaptive_2d_cells(&h, &cells, tol, budget);
                    (r.value, r.error, r.evaluations, r.converged)
                }
                QuadMethod::MonteCarlo => monte_carlo(&*h, rect, budget, cfg.seed.wrapping_add(idx as u64), tol),
            }
        })
        .collect();
    let value = results.iter().map(|r| r.0).sum::<f64>();
    let error = match cfg.method {
        QuadMethod::Adaptive => results.iter().map(|r| r.1).sum::<f64>(),
        QuadMethod::MonteCarlo => results.iter().map(|r| r.1 * r.1).sum::<f64>().sqrt(),
    };
    SurfaceIntegral {
        value,
        error,
        evaluations: results.iter().map(|r| r.2).sum(),
        converged: results.iter().all(|r| r.3) && value.is_finite(),
        charts: results.iter().map(|r| r.0).collect(),
    }
}

/// Breakpoints of a chart: a uniform base grid plus the chart coordinates of the excluded
/// points, so that their logarithmic singularities fall on cell corners.
fn initial_cells(ctx: &Context, chart: &Chart, rect: Rect, excluded: &[Complex64]) -> Vec<Rect> {
    let mut xs: Vec<f64> = (0..=BASE_GRID.0).map(|k| rect.x0 + (rect.x1 - rect.x0) * k as f64 / BASE_GRID.0 as f64).collect();
    let mut ys: Vec<f64> = (0..=BASE_GRID.1).map(|k| rect.y0 + (rect.y1 - rect.y0) * k as f64 / BASE_GRID.1 as f64).collect();
    let two_pi = 2.0 * PI;
    for &q in excluded {
        let coords: Vec<(f64, f64)> = match *chart {
            Chart::Infinity { s_max } => {
                let t = (q - ctx.periods.center).inv().sqrt();
                [t, -t].iter().filter(|t| t.norm() < s_max).map(|t| (t.norm(), t.arg().rem_euclid(two_pi))).collect()
            }
            Chart::Branch { j } => {
                let d = q - ctx.curve().roots()[j];
                if d.norm() == 0.0 {
                    continue;
                }
                let theta = d.arg().rem_euclid(two_pi);
                let rho = rho_max(ctx, j, Complex64::from_polar(1.0, theta));
                if d.norm() < rho {
                    vec![((d.norm() / rho).sqrt(), theta)]
                } else {
                    vec![]
                }
            }
        };
        for (a, b) in coords {
            xs.push(a);
            ys.push(b);
        }
    }
    for v in [&mut xs, &mut ys] {
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    grid(&xs, &ys)
}

/// Distance from `a_j` to the circle `|x - c| = r_inf` along the unit direction `e`.
fn rho_max(ctx: &Context, j: usize, e: Complex64) -> f64 {
    let p = ctx.curve().roots()[j] - ctx.periods.center;
    let b = (p * e.conj()).re;
    -b + (b * b + ctx.periods.r_inf * ctx.periods.r_inf - p.norm_sqr()).sqrt()
}

fn monte_carlo(h: &(dyn Fn(f64, f64) -> f64 + Sync), r: Rect, n: usize, seed: u64, tol: f64) -> (f64, f64, usize, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = (r.x1 - r.x0) * (r.y1 - r.y0);
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..n {
        let a = rng.gen_range(r.x0..r.x1);
        let b = rng.gen_range(r.y0..r.y1);
        let v = h(a, b);
        sum += v;
        sum2 += v * v;
    }
    let mean = sum / n as f64;
    let var = (sum2 / n as f64 - mean * mean).max(0.0);
    let err = area * (var / n as f64).sqrt();
    (area * mean, err, n, err <= tol)
}

fn infinity_integrand<F: Fn(&CVec) -> f64>(ctx: &Context, cfg: &QuadConfig, f: &F, s: f64, phi: f64) -> f64 {
    if s == 0.0 || s < cfg.exclusion_radius {
        return 0.0;
    }
    let t = Complex64::from_polar(s, phi);
    let Ok(u) = ctx.periods.z_infinity(t, ctx.periods.center) else { return f64::NAN };
    ctx.density_t(t) * s * f(&u)
}

fn branch_integrand<F: Fn(&CVec) -> f64>(
    ctx: &Context,
    cfg: &QuadConfig,
    excluded: &[Complex64],
    f: &F,
    j: usize,
    s: f64,
    theta: f64,
) -> f64 {
    let roots = ctx.curve().roots();
    let g = ctx.genus();
    let aj = roots[j];
    let e = Complex64::from_polar(1.0, theta);
    let rho_max = rho_max(ctx, j, e);
    let r = s * s * rho_max;
    if r == 0.0 || r < cfg.exclusion_radius {
        return 0.0;
    }
    let x = aj + e * r;
    if excluded.iter().any(|&q| (x - q).norm() < cfg.exclusion_radius) {
        return 0.0;
    }
    let mut others = 1.0;
    let mut chi_den = 1.0;
    for (k, &ak) in roots.iter().enumerate() {
        if k != j {
            let d = (x - ak).norm();
            others *= d;
            chi_den += (r / d).powi(4);
        }
    }
    let weight = ctx.quadratic_form(&powers(x, g)) / (4.0 * g as f64 * others) * 2.0 * s * rho_max / chi_den;
    if weight == 0.0 {
        return 0.0;
    }
    let (m, _) = ctx.curve().distance_to_branch_points(x);
    let y: Complex64 = roots.iter().map(|&a| psqrt(x - a)).product();
    let Ok(seg) = ctx.periods.from_branch_point(m, x, y) else { return f64::NAN };
    let u = &ctx.periods.branch_images[m] + seg;
    weight * (f(&u) + f(&-u))
}

#[cfg(test)]
mod tests {
    use super::super::tests::generic_g2;
    use super::*;

    #[test]
    fn total_mass_is_one() {
        let ctx = generic_g2();
        let cfg = QuadConfig { tol: 1e-6, ..Default::default() };
        let r = integrate_surface(&ctx, &cfg, &[], |_| 1.0);
        assert!(r.converged, "{r:?}");
        assert!((r.value - 1.0).abs() < 1e-5, "{r:?}");
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let ctx = generic_g2();
        let cfg = QuadConfig { method: QuadMethod::MonteCarlo, tol: 1e-2, budget: 60_000, seed: 7, exclusion_radius: 0.0 };
        let a = integrate_surface(&ctx, &cfg, &[], |_| 1.0);
        let b = integrate_surface(&ctx, &cfg, &[], |_| 1.0);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!((a.value - 1.0).abs() < 5.0 * a.error + 1e-3, "{a:?}");
    }
}
