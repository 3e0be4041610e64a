use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use num_traits::ToPrimitive;
use statrs::function::gamma::{gamma, gamma_ur};

use super::chars::ThetaChar;
use crate::error::{Error, Result};
use crate::periods::{CMat, CVec};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ThetaConfig {
    /// Absolute tolerance on the normalized theta value.
    pub tol: f64,
    /// Working precision in mantissa bits; only binary64 (53) is available.
    pub precision_bits: u32,
    /// Refuse ellipsoids predicted to contain more lattice points than this.
    pub max_points: usize,
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig { tol: 1e-12, precision_bits: 53, max_points: 2_000_000 }
    }
}

/// Theta evaluation at a fixed period matrix `tau`.
///
/// Values are returned normalized: `exp(-pi Im(w)^T Y^{-1} Im(w)) * theta[eta](w; tau)`, which
/// is bounded by the truncated lattice sum and never overflows.
#[derive(Clone, Debug)]
pub struct ThetaEvaluator {
    g: usize,
    pub tau: CMat,
    x: DMatrix<f64>,
    y_inv: DMatrix<f64>,
    /// Upper-triangular `R` with `Y = R^T R`.
    r: DMatrix<f64>,
    /// Enumeration radius for `(m-c)^T Y (m-c)`.
    radius2: f64,
    pub cfg: ThetaConfig,
    pub tail_bound: f64,
}

/// Upper bound on `sum_{|v| >= R} exp(-|v|^2)` over any translate of a lattice in `R^g` whose
/// minimum is at least `rho`, valid for `R >= rho`.
pub fn tail_bound(g: usize, rho: f64, r: f64) -> f64 {
    let h = rho / 2.0;
    let x = (r - rho).max(0.0).powi(2);
    let mut s = 0.0;
    for j in 0..g {
        let a = (j as f64 + 1.0) / 2.0;
        let upper = if x == 0.0 { gamma(a) } else { gamma_ur(a, x) * gamma(a) };
        let c = crate::symfunc::binomial(g as i64 - 1, j as i64).to_f64().expect("small binomial");
        s += c * h.powi((g - 1 - j) as i32) * 0.5 * upper;
    }
    g as f64 / h.powi(g as i32) * s
}

impl ThetaEvaluator {
    pub fn new(tau: &CMat, cfg: ThetaConfig) -> Result<Self> {
        if cfg.precision_bits > 53 {
            return Err(Error::UnsupportedPrecision(cfg.precision_bits));
        }
        if cfg.tol.is_nan() || cfg.tol < 1e-15 {
            return Err(Error::ToleranceUnreachable { tol: cfg.tol });
        }
        let g = tau.nrows();
        let y = {
            let im = tau.map(|z| z.im);
            (&im + im.transpose()) * 0.5
        };
        let lambda_min = SymmetricEigen::new(y.clone()).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if lambda_min.is_nan() || lambda_min <= 0.0 {
            return Err(Error::BadPeriods(format!("Im tau not positive definite (min eigenvalue {lambda_min:.3e})")));
        }
        let chol = Cholesky::new(y.clone()).expect("positive definite");
        let r = chol.l().transpose();
        let y_inv = chol.inverse();
        // radius in v = sqrt(pi) R (m - c) coordinates
        let rho = (PI * lambda_min).sqrt();
        let mut hi = rho.max(1.0);
        while tail_bound(g, rho, hi) > cfg.tol {
            hi *= 1.5;
            if hi > 1e4 {
                return Err(Error::RadiusOverflow(format!("no radius reaches tolerance {:e}", cfg.tol)));
            }
        }
        let mut lo = rho;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if tail_bound(g, rho, mid) > cfg.tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let radius_v = hi;
        // predicted point count: ball volume over covolume
        let ball = PI.powf(g as f64 / 2.0) * radius_v.powi(g as i32) / gamma(g as f64 / 2.0 + 1.0);
        let covol = PI.powf(g as f64 / 2.0) * y.determinant().sqrt();
        let predicted = ball / covol;
        if predicted > cfg.max_points as f64 {
            return Err(Error::RadiusOverflow(format!("{predicted:.3e} lattice points needed (cap {})", cfg.max_points)));
        }
        Ok(ThetaEvaluator {
            g,
            tau: tau.clone(),
            x: tau.map(|z| z.re),
            y_inv,
            r,
            radius2: radius_v * radius_v / PI,
            cfg,
            tail_bound: tail_bound(g, rho, radius_v),
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// `pi Im(w)^T Y^{-1} Im(w)`.
    pub fn gaussian_exponent(&self, w: &CVec) -> f64 {
        let b = w.map(|z| z.im);
        PI * (b.transpose() * &self.y_inv * &b)[(0, 0)]
    }

    /// Normalized theta `exp(-pi Im(w)^T Y^{-1} Im(w)) theta[eta](w; tau)`.
    pub fn normalized(&self, ch: &ThetaChar, w: &CVec) -> Complex64 {
        let g = self.g;
        let b = w.map(|z| z.im);
        let c = -(&self.y_inv * &b);
        let eta1 = ch.top_f64();
        let eta2 = ch.bottom_f64();
        let shift: Vec<f64> = (0..g).map(|i| w[i].re + eta2[i]).collect();
        let mut m = vec![0.0; g];
        let mut acc = Complex64::new(0.0, 0.0);
        self.enumerate(g, &c, &eta1, &mut m, 0.0, &mut |m: &[f64], q: f64| {
            let mut phase = 0.0;
            for i in 0..g {
                let xm: f64 = m.iter().enumerate().map(|(j, &mj)| self.x[(i, j)] * mj).sum();
                phase += m[i] * (PI * xm + 2.0 * PI * shift[i]);
            }
            acc += Complex64::from_polar((-PI * q).exp(), phase);
        });
        acc
    }

    /// Fincke-Pohst enumeration of `m in Z^g + eta'` with `|R (m - c)|^2 <= radius2`.
    fn enumerate<F: FnMut(&[f64], f64)>(&self, level: usize, c: &nalgebra::DVector<f64>, eta1: &[f64], m: &mut [f64], partial: f64, f: &mut F) {
        if level == 0 {
            f(m, partial);
            return;
        }
        let i = level - 1;
        let rii = self.r[(i, i)];
        let mut s = 0.0;
        for j in level..self.g {
            s += self.r[(i, j)] * (m[j] - c[j]);
        }
        let center = c[i] - s / rii;
        let rem = self.radius2 - partial;
        if rem < 0.0 {
            return;
        }
        let half = rem.sqrt() / rii;
        let lo = (center - half - eta1[i]).ceil() as i64;
        let hi = (center + half - eta1[i]).floor() as i64;
        for k in lo..=hi {
            let mi = k as f64 + eta1[i];
            let t = rii * (mi - center);
            m[i] = mi;
            self.enumerate(i, c, eta1, m, partial + t * t, f);
        }
    }

    /// Unnormalized `theta[eta](w; tau)`; may overflow for large `Im w`.
    pub fn theta(&self, ch: &ThetaChar, w: &CVec) -> Complex64 {
        self.normalized(ch, w) * self.gaussian_exponent(w).exp()
    }

    /// `log |theta[eta](w; tau)|`.
    pub fn log_abs_theta(&self, ch: &ThetaChar, w: &CVec) -> f64 {
        self.normalized(ch, w).norm().ln() + self.gaussian_exponent(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn genus_one_at_i() {
        let tau = CMat::from_element(1, 1, c(0.0, 1.0));
        let ev = ThetaEvaluator::new(&tau, ThetaConfig::default()).unwrap();
        let v = ev.theta(&ThetaChar::zero(1), &CVec::zeros(1));
        let exact: f64 = (-50i32..=50).map(|n| (-PI * (n * n) as f64).exp()).sum();
        assert!((v.re - exact).abs() < 1e-13 && v.im.abs() < 1e-13);
        assert!((exact - 1.086_434_811_213_308).abs() < 1e-15);
    }

    fn sample_tau() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0.3, 1.1), c(-0.2, 0.4), c(-0.2, 0.4), c(0.1, 0.9)])
    }

    #[test]
    fn odd_characteristics_vanish_at_zero() {
        let ev = ThetaEvaluator::new(&sample_tau(), ThetaConfig::default()).unwrap();
        for ch in ThetaChar::all(2) {
            let v = ev.theta(&ch, &CVec::zeros(2));
            if !ch.is_even() {
                assert!(v.norm() < 1e-12, "{ch}: {v}");
            } else {
                assert!(v.norm() > 1e-3, "{ch}: {v}");
            }
        }
    }

    #[test]
    fn quasi_periodicity() {
        let tau = sample_tau();
        let ev = ThetaEvaluator::new(&tau, ThetaConfig::default()).unwrap();
        let z = CVec::from_vec(vec![c(0.21, -0.13), c(-0.4, 0.3)]);
        let ch = ThetaChar::zero(2);
        let shifted = &z + tau.column(0);
        let lhs = ev.theta(&ch, &shifted);
        let rhs = (c(0.0, -PI) * tau[(0, 0)] - c(0.0, 2.0 * PI) * z[0]).exp() * ev.theta(&ch, &z);
        assert!((lhs - rhs).norm() < 1e-11 * rhs.norm().max(1.0));
    }

    #[test]
    fn tail_bound_is_honest() {
        let tau = sample_tau();
        let z = CVec::from_vec(vec![c(0.7, 0.45), c(0.1, -0.6)]);
        let ch = ThetaChar::new(vec![1, 0], vec![1, 1]);
        for tol in [1e-4, 1e-6, 1e-9] {
            let a = ThetaEvaluator::new(&tau, ThetaConfig { tol, ..Default::default() }).unwrap();
            let b = ThetaEvaluator::new(&tau, ThetaConfig { tol: tol / 100.0, ..Default::default() }).unwrap();
            assert!((a.normalized(&ch, &z) - b.normalized(&ch, &z)).norm() < tol);
        }
    }

    #[test]
    fn rejects_unsupported_settings() {
        let cfg = ThetaConfig { precision_bits: 64, ..Default::default() };
        assert!(matches!(ThetaEvaluator::new(&sample_tau(), cfg), Err(Error::UnsupportedPrecision(64))));
        let cfg = ThetaConfig { tol: 1e-30, ..Default::default() };
        assert!(matches!(ThetaEvaluator::new(&sample_tau(), cfg), Err(Error::ToleranceUnreachable { .. })));
    }
}
