//! Polynomial evaluation and simultaneous root finding (Aberth-Ehrlich).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluate a polynomial given by coefficients from the highest degree down.
pub fn poly_eval(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

pub fn poly_derivative(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    c[..n].iter().enumerate().map(|(i, &a)| a * (n - i) as f64).collect()
}

/// Monic polynomial coefficients (highest first) from its roots.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = c.clone();
        next.push(Complex64::new(0.0, 0.0));
        for i in 0..c.len() {
            next[i + 1] -= c[i] * r;
        }
        c = next;
    }
    c
}

/// All roots of a monic polynomial (coefficients highest first).
pub fn aberth_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let dc = poly_derivative(c);
    // Cauchy bound radius and a rotated circle start
    let bound = 1.0 + c[1..].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let r0 = bound.min(c[1..].iter().enumerate().map(|(i, a)| a.norm().powf(1.0 / (i + 1) as f64)).fold(0.0, f64::max) * 2.0 + 0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let p = poly_eval(c, z[k]);
            let dp = poly_eval(&dc, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[k] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // Newton polish
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let dp = poly_eval(&dc, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = poly_eval(c, *zk) / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    let scale: f64 = c.iter().map(|a| a.norm()).sum::<f64>() * (1.0 + z.iter().map(|r| r.norm()).fold(0.0, f64::max)).powi(n as i32);
    for r in &z {
        let res = poly_eval(c, *r).norm();
        if !res.is_finite() || res > 1e-10 * scale {
            return Err(Error::RootFinder(format!("residual {res:.3e} at {r}")));
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_round_trip() {
        let roots: Vec<Complex64> = vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.3, 0.7),
            Complex64::new(1.2, -0.4),
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 1.0),
        ];
        let c = poly_from_roots(&roots);
        let found = aberth_roots(&c).unwrap();
        for r in &roots {
            let d = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12, "{r}: {d}");
        }
    }
}
