//! Limits of sampled sequences: Richardson extrapolation and Cauchy-integral Taylor
//! coefficients of analytic functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

/// Extrapolated limit of `v(h)` as `h -> 0` from samples at `h_j = h_0 / 2^j`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub error: f64,
    /// Observed convergence order of the raw sequence; `None` when it is flat to rounding.
    pub order: Option<f64>,
    pub steps: Vec<f64>,
    pub samples: Vec<f64>,
}

impl LimitEstimate {
    /// Order check with the convention that a flat sequence has converged.
    pub fn order_at_least(&self, p: f64) -> bool {
        self.order.is_none_or(|o| o >= p)
    }
}

/// Richardson table for an expansion in powers `h^{step}, h^{2 step}, ...`.
pub fn richardson(steps: &[f64], samples: &[f64], step: u32) -> LimitEstimate {
    let n = samples.len();
    assert!(n >= 2 && steps.len() == n);
    let mut t = vec![samples.to_vec()];
    for k in 1..n {
        let f = 2f64.powi((step as usize * k) as i32);
        let prev = &t[k - 1];
        let col: Vec<f64> = (1..prev.len()).map(|j| prev[j] + (prev[j] - prev[j - 1]) / (f - 1.0)).collect();
        t.push(col);
    }
    // t[k][i] uses samples i..=i+k
    let mut best = (samples[n - 1], (samples[n - 1] - samples[n - 2]).abs());
    for k in 1..n {
        for i in 1..t[k].len() {
            let v = t[k][i];
            let e = (v - t[k][i - 1]).abs().max((v - t[k - 1][i + 1]).abs());
            if e < best.1 {
                best = (v, e);
            }
        }
    }
    let scale = samples.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let noise = 1e-11 * scale.max(1e-300);
    let d: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
    let mut orders: Vec<f64> = d
        .windows(2)
        .filter(|w| w[0].abs() > noise && w[1].abs() > noise)
        .map(|w| (w[0].abs() / w[1].abs()).log2())
        .collect();
    orders.sort_by(|a, b| a.total_cmp(b));
    let order = if orders.is_empty() { None } else { Some(orders[orders.len() / 2]) };
    LimitEstimate {
        value: best.0,
        error: best.1.max(f64::EPSILON * best.0.abs()),
        order,
        steps: steps.to_vec(),
        samples: samples.to_vec(),
    }
}

/// Taylor coefficients `c_0..c_{k_max}` of `f` at 0 from `m` samples on `|h| = rho`.
pub fn cauchy_coefficients<F: Fn(Complex64) -> Complex64>(f: F, rho: f64, m: usize, k_max: usize) -> Vec<Complex64> {
    let vals: Vec<Complex64> = (0..m).map(|j| f(Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64))).collect();
    (0..=k_max)
        .map(|k| {
            let mut s = Complex64::new(0.0, 0.0);
            for (j, v) in vals.iter().enumerate() {
                s += v * Complex64::from_polar(1.0, -2.0 * PI * (j * k % m) as f64 / m as f64);
            }
            s / (m as f64 * rho.powi(k as i32))
        })
        .collect()
}

/// Evaluate `sum_k c[k] h^k` by Horner's rule.
pub fn horner(c: &[Complex64], h: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * h + ck)
}
