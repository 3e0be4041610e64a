//! Wronskians of the differentials `mu_k = x^{k-1} dx / 2y`, differentiated exactly in the
//! function field: every derivative of `x^{k-1} / 2y` is `sum_m p_m(x) y^{-(2m+1)}` and
//! `d/dx y^{-n} = -(n/2) f'(x) y^{-(n+2)}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::Curve;

type Poly = Vec<Complex64>;

fn poly_add(a: &mut Poly, b: &[Complex64], scale: Complex64) {
    if a.len() < b.len() {
        a.resize(b.len(), Complex64::new(0.0, 0.0));
    }
    for (ai, bi) in a.iter_mut().zip(b) {
        *ai += bi * scale;
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_diff(a: &[Complex64]) -> Poly {
    a.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

fn poly_eval(a: &[Complex64], x: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// `d/dx` of `sum_m p_m y^{-(2m+1)}`.
fn derive(terms: &[Poly], fprime: &[Complex64]) -> Vec<Poly> {
    let mut out: Vec<Poly> = vec![Vec::new(); terms.len() + 1];
    for (m, p) in terms.iter().enumerate() {
        poly_add(&mut out[m], &poly_diff(p), Complex64::new(1.0, 0.0));
        let n = (2 * m + 1) as f64;
        poly_add(&mut out[m + 1], &poly_mul(p, fprime), Complex64::new(-n / 2.0, 0.0));
    }
    out
}

/// Rows `i = 0..g-1` of `phi_l^{(i)} / i!` with `phi_l = x^{l-1} / 2y`, as symbolic terms.
fn derivative_table(curve: &Curve) -> Vec<Vec<Vec<Poly>>> {
    let g = curve.genus();
    let mut f: Vec<Complex64> = curve.coefficients();
    f.reverse();
    let fprime = poly_diff(&f);
    (1..=g)
        .map(|l| {
            let mut p = vec![Complex64::new(0.0, 0.0); l];
            p[l - 1] = Complex64::new(0.5, 0.0);
            let mut rows = vec![vec![p]];
            for _ in 1..g {
                let next = derive(rows.last().expect("row"), &fprime);
                rows.push(next);
            }
            rows
        })
        .collect()
}

/// `W_x(mu_1, ..., mu_g)` at the finite point `(x, y)`.
pub fn wronskian_x(curve: &Curve, x: Complex64, y: Complex64) -> Complex64 {
    let g = curve.genus();
    let table = derivative_table(curve);
    let yinv = 1.0 / y;
    let yinv2 = yinv * yinv;
    let mut fact = 1.0;
    let mut m = DMatrix::<Complex64>::zeros(g, g);
    for i in 0..g {
        if i > 0 {
            fact *= i as f64;
        }
        for l in 0..g {
            let mut v = Complex64::new(0.0, 0.0);
            let mut ypow = yinv;
            for p in &table[l][i] {
                v += poly_eval(p, x) * ypow;
                ypow *= yinv2;
            }
            m[(i, l)] = v / fact;
        }
    }
    m.determinant()
}

/// `W_{z_g}(mu)` at `(x, y)`, using `dz_g / dx = x^{g-1} / 2y`.
pub fn wronskian_zg(curve: &Curve, x: Complex64, y: Complex64) -> Complex64 {
    let g = curve.genus();
    let dx_dz = 2.0 * y / x.powi(g as i32 - 1);
    wronskian_x(curve, x, y) * dx_dz.powi((g * (g + 1) / 2) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{psqrt, Sheet, SurfacePoint};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn curve(roots: Vec<Complex64>) -> Curve {
        Curve::from_roots(roots, None).unwrap()
    }

    #[test]
    fn genus_two_wronskian_is_one_over_four_f() {
        let cv = curve(vec![c(-1.3, 0.2), c(-0.4, -0.9), c(0.1, 0.6), c(0.9, -0.3), c(1.6, 0.4)]);
        let x = c(0.37, 1.21);
        let SurfacePoint::Finite { y, .. } = cv.point(x, Sheet::Upper) else { unreachable!() };
        let w = wronskian_x(&cv, x, y);
        let expect = 1.0 / (4.0 * cv.f(x));
        assert!((w - expect).norm() < 1e-13 * expect.norm(), "{w} vs {expect}");
    }

    #[test]
    fn agrees_with_finite_differences() {
        let cv = curve(vec![c(-1.5, 0.1), c(-0.9, -0.7), c(-0.2, 0.8), c(0.3, -0.4), c(0.8, 0.9), c(1.2, -0.2), c(1.9, 0.3)]);
        let g = cv.genus();
        let x0 = c(0.41, -1.33);
        let y0 = cv.y_cut(x0);
        // y continued analytically around x0
        let yy = |x: Complex64| y0 * cv.roots().iter().map(|&a| psqrt((x - a) / (x0 - a))).product::<Complex64>();
        let phi = |l: usize, x: Complex64| x.powi(l as i32) / (2.0 * yy(x));
        // Taylor coefficients by a Cauchy integral of radius 0.1
        let m = 64;
        let mut mat = DMatrix::<Complex64>::zeros(g, g);
        for l in 0..g {
            for i in 0..g {
                let mut s = c(0.0, 0.0);
                for j in 0..m {
                    let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64);
                    s += phi(l, x0 + 0.1 * e) * e.powi(-(i as i32));
                }
                mat[(i, l)] = s / (m as f64 * 0.1f64.powi(i as i32));
            }
        }
        let fd = mat.determinant();
        let w = wronskian_x(&cv, x0, y0);
        assert!((fd - w).norm() < 1e-9 * w.norm(), "{fd} vs {w}");
    }

    #[test]
    fn invariant_under_translation() {
        // the differentials of the translated model differ by a unipotent change of basis
        let cv = curve(vec![c(-1.3, 0.2), c(-0.4, -0.9), c(0.1, 0.6), c(0.9, -0.3), c(1.6, 0.4)]);
        let shift = c(0.6, -1.1);
        let moved = cv.translated(shift).unwrap();
        let x = c(0.7, 0.8);
        let y = cv.y_cut(x);
        let a = wronskian_x(&cv, x, y);
        let b = wronskian_x(&moved, x + shift, y);
        assert!((a - b).norm() < 1e-12 * a.norm(), "{a} vs {b}");
    }
}
