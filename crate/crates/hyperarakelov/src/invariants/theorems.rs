//! The Green function between Weierstrass points through leading coefficients, and the
//! identities relating it to `T(X)` and `||phi_g||(X)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::leading::{leading_a, leading_a_closed, leading_b, leading_b_closed, LimitConfig};
use super::{binomials, Context};
use crate::curve::Weierstrass;
use crate::error::Result;
use crate::periods::{CVec, PeriodConfig};

/// Leading coefficients computed in each of the `2g + 2` models with a Weierstrass point at
/// infinity. Rows and columns follow `points`.
#[derive(Clone, Debug, Serialize)]
pub struct WeierstrassData {
    pub genus: usize,
    pub points: Vec<Weierstrass>,
    /// `log_a[i][j] = log A(W_j)` in the model with `W_i` at infinity.
    pub log_a: Vec<Vec<f64>>,
    pub log_a_error: Vec<Vec<f64>>,
    /// Closed form of `log A(W_i)` in the model with `W_i` at infinity.
    pub log_a_closed: Vec<f64>,
    pub log_b: Vec<f64>,
    pub log_b_error: Vec<f64>,
    pub log_b_closed: Vec<f64>,
    /// `|W_{z_g}(mu)| / |z_g|^w` at infinity in each model, expected `2^{g(g-1)/2}`.
    pub wronskian_leading: Vec<f64>,
    /// Smallest measured extrapolation order over all limits (`None` entries skipped).
    pub min_order: f64,
    pub max_vanishing_residual: f64,
    /// `log G'(W_i, W_j)`, diagonal unused.
    pub log_green_prime: Vec<Vec<f64>>,
    /// `log T(X)` recovered from `A` and `B` in each model.
    pub log_t_limit: Vec<f64>,
}

fn index_of(points: &[Weierstrass], w: Weierstrass) -> usize {
    points.iter().position(|&p| p == w).expect("Weierstrass point of the model")
}

impl WeierstrassData {
    pub fn compute(ctx: &Context, pcfg: &PeriodConfig, cfg: &LimitConfig) -> Result<Self> {
        let g = ctx.genus();
        let gf = g as f64;
        let w = ctx.weight();
        let points = ctx.curve().weierstrass_points();
        let np = points.len();
        let models = ctx.weierstrass_models(pcfg)?;
        let mut log_a = vec![vec![0.0; np]; np];
        let mut log_a_error = vec![vec![0.0; np]; np];
        let mut log_a_closed = vec![0.0; np];
        let mut log_b = vec![0.0; np];
        let mut log_b_error = vec![0.0; np];
        let mut log_b_closed = vec![0.0; np];
        let mut wronskian_leading = vec![0.0; np];
        let mut min_order = f64::INFINITY;
        let mut max_vanishing_residual: f64 = 0.0;
        for (at_inf, model, map) in &models {
            let i = index_of(&points, *at_inf);
            for &(model_w, orig_w) in map {
                let j = index_of(&points, orig_w);
                let a = leading_a(model, model_w, cfg)?;
                log_a[i][j] = a.log_value();
                log_a_error[i][j] = a.relative_error();
                if let Some(o) = a.limit.order {
                    min_order = min_order.min(o);
                }
                max_vanishing_residual = max_vanishing_residual.max(a.vanishing_residual);
            }
            log_a_closed[i] = leading_a_closed(model);
            let (b, raw) = leading_b(model, cfg)?;
            log_b[i] = b.log_value();
            log_b_error[i] = b.relative_error();
            log_b_closed[i] = leading_b_closed(model);
            wronskian_leading[i] = raw.value();
            if let Some(o) = b.limit.order {
                min_order = min_order.min(o);
            }
        }
        let mut log_green_prime = vec![vec![0.0; np]; np];
        let mut log_t_limit = vec![0.0; np];
        for i in 0..np {
            let total: f64 = log_a[i].iter().sum();
            for j in 0..np {
                if i != j {
                    log_green_prime[i][j] = (log_a[i][j] - w / gf.powi(3) * total) / gf;
                }
            }
            log_t_limit[i] = -(gf + 1.0) * log_a[i][i] + w * (gf - 1.0) / gf.powi(3) * total + 2.0 * log_b[i];
        }
        if !min_order.is_finite() {
            min_order = f64::INFINITY;
        }
        Ok(WeierstrassData {
            genus: g,
            points,
            log_a,
            log_a_error,
            log_a_closed,
            log_b,
            log_b_error,
            log_b_closed,
            wronskian_leading,
            min_order,
            max_vanishing_residual,
            log_green_prime,
            log_t_limit,
        })
    }

    /// Largest `|log A(W) - closed form|` and `|log B(W) - closed form|` over the models.
    pub fn closed_form_residuals(&self) -> (f64, f64) {
        let n = self.points.len();
        let a = (0..n).map(|i| (self.log_a[i][i] - self.log_a_closed[i]).abs()).fold(0.0, f64::max);
        let b = (0..n).map(|i| (self.log_b[i] - self.log_b_closed[i]).abs()).fold(0.0, f64::max);
        (a, b)
    }

    /// Largest `|log G'(W, W') - log G'(W', W)|`; the two sides come from different models.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.points.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.log_green_prime[i][j] - self.log_green_prime[j][i]).abs());
            }
        }
        worst
    }

    /// Largest deviation of the Wronskian leading coefficient from `2^{g(g-1)/2}`, relative.
    pub fn wronskian_residual(&self) -> f64 {
        let expect = 2f64.powi((self.genus * (self.genus - 1) / 2) as i32);
        self.wronskian_leading.iter().map(|v| (v / expect - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Per Weierstrass point `W`: `|log LHS - log RHS|` of
/// `prod_{W' != W} G'(W,W')^{(g-1)^2} = 2^{(g-1)^2} pi^{2g+2} T^{(g+1)/g} ||phi_g||^{1/2n}`,
/// and the spread of the left side over `W`.
pub fn thm_main_residuals(data: &WeierstrassData, log_t: f64, log_phi: f64) -> (Vec<f64>, f64) {
    let g = data.genus as f64;
    let (n, _, _) = binomials(data.genus);
    let rhs = (g - 1.0).powi(2) * 2f64.ln() + (2.0 * g + 2.0) * PI.ln() + (g + 1.0) / g * log_t + log_phi / (2.0 * n as f64);
    let lhs: Vec<f64> = (0..data.points.len())
        .map(|i| {
            let s: f64 = (0..data.points.len()).filter(|&j| j != i).map(|j| data.log_green_prime[i][j]).sum();
            (g - 1.0).powi(2) * s
        })
        .collect();
    let lo = lhs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = lhs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lhs.iter().map(|l| (l - rhs).abs()).collect(), hi - lo)
}

/// `|log LHS - log RHS|` of
/// `prod_{(W,W')} G'(W,W')^{n(g-1)} = pi^{-2g(g+2)m} T^{-(g+2)m} ||phi_g||^{-3(g+1)/2}`.
pub fn thm_second_residual(data: &WeierstrassData, log_t: f64, log_phi: f64) -> f64 {
    let g = data.genus as f64;
    let (n, m, _) = binomials(data.genus);
    let (n, m) = (n as f64, m as f64);
    let np = data.points.len();
    let mut s = 0.0;
    for i in 0..np {
        for j in 0..np {
            if i != j {
                s += data.log_green_prime[i][j];
            }
        }
    }
    let lhs = n * (g - 1.0) * s;
    let rhs = -2.0 * g * (g + 2.0) * m * PI.ln() - (g + 2.0) * m * log_t - 1.5 * (g + 1.0) * log_phi;
    (lhs - rhs).abs()
}

fn image_sum(ctx: &Context, terms: &[(f64, Weierstrass)]) -> CVec {
    terms.iter().fold(CVec::zeros(ctx.genus()), |acc, &(c, w)| acc + ctx.periods.branch_image(w) * Complex64::new(c, 0.0))
}

/// Genus two: `|log LHS - log RHS|` of
/// `G'(W,W')^2 = 2^{1/4} ||phi_2||^{-3/64} prod_{W'' != W,W'} ||theta||(W - W' + W'')` for the
/// pair `(i, j)` of `data.points`.
pub fn g2_remark_residual(ctx: &Context, data: &WeierstrassData, i: usize, j: usize) -> f64 {
    let (wi, wj) = (data.points[i], data.points[j]);
    let rhs: f64 = 0.25 * 2f64.ln() - 3.0 / 64.0 * ctx.log_phi
        + data
            .points
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, &wk)| ctx.log_norm(&image_sum(ctx, &[(1.0, wi), (-1.0, wj), (1.0, wk)])))
            .sum::<f64>();
    (2.0 * data.log_green_prime[i][j] - rhs).abs()
}

/// `g log G'(W,W') - sum log ||theta||(W - W' + W_1 + ... + W_{g-1})` over `(g-1)`-subsets of
/// the remaining points, for every ordered pair. A constant value supports the conjectured
/// general formula; it is reported, never asserted.
pub fn exploratory_ratio(ctx: &Context, data: &WeierstrassData) -> Vec<f64> {
    let g = data.genus;
    let np = data.points.len();
    let mut out = Vec::new();
    for i in 0..np {
        for j in 0..np {
            if i == j {
                continue;
            }
            let rest: Vec<usize> = (0..np).filter(|&k| k != i && k != j).collect();
            let mut s = 0.0;
            for subset in subsets(&rest, g - 1) {
                let mut terms = vec![(1.0, data.points[i]), (-1.0, data.points[j])];
                terms.extend(subset.iter().map(|&k| (1.0, data.points[k])));
                s += ctx.log_norm(&image_sum(ctx, &terms));
            }
            out.push(g as f64 * data.log_green_prime[i][j] - s);
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with.extend(subsets(&items[1..], k));
    with
}

/// Coefficients over `(log 2, log pi, log ||phi_g||)` of `log T` obtained by eliminating the
/// product of all `G'(W, W')` between the two theorems, and those of the closed formula
/// `T = (2 pi)^{-2g} (2^{-(4g+4)n} ||phi_g||)^{-(3g-1)/(8ng)}`.
pub fn exponent_elimination(g: usize) -> ([BigRational; 3], [BigRational; 3]) {
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let (n, m, _) = binomials(g);
    let (n, m, gi) = (n as i64, m as i64, g as i64);
    // main theorem multiplied over all 2g+2 points and scaled by n / (g-1):
    // n (g-1) L = c [ (g-1)^2 log 2 + (2g+2) log pi + (g+1)/g log T + 1/(2n) log phi ]
    let c = q(n * (2 * gi + 2), gi - 1);
    let main = [
        &c * q((gi - 1) * (gi - 1), 1),
        &c * q(2 * gi + 2, 1),
        &c * q(gi + 1, gi),
        &c * q(1, 2 * n),
    ];
    // second theorem: n (g-1) L = -2g(g+2)m log pi - (g+2)m log T - 3(g+1)/2 log phi
    let second = [BigRational::zero(), q(-2 * gi * (gi + 2) * m, 1), q(-(gi + 2) * m, 1), q(-3 * (gi + 1), 2)];
    // main - second = 0, solved for log T
    let t_coeff = &main[2] - &second[2];
    let derived = [
        -(&main[0] - &second[0]) / &t_coeff,
        -(&main[1] - &second[1]) / &t_coeff,
        -(&main[3] - &second[3]) / &t_coeff,
    ];
    let e = q(-(3 * gi - 1), 8 * n * gi);
    let closed = [
        q(-2 * gi, 1) - &e * q((4 * gi + 4) * n, 1),
        q(-2 * gi, 1),
        e.clone(),
    ];
    (derived, closed)
}
