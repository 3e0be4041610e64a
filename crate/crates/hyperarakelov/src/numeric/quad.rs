//! One-dimensional quadrature: Gauss-Legendre, Gauss-Chebyshev and adaptive Gauss-Kronrod.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss-Chebyshev (first kind) nodes for `int_{-1}^{1} h(s) / sqrt(1-s^2) ds`; weight is `pi/n`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (1..=n).map(|m| ((2 * m - 1) as f64 * PI / (2 * n) as f64).cos()).collect()
}

/// Integrate `int_{-1}^{1} h(s)/sqrt(1-s^2) ds` for vector-valued `h`, doubling the node
/// count from `n0` until the relative change drops below `rtol`. Returns the value and the
/// node count used.
pub fn gauss_chebyshev_vec<F>(h: F, dim: usize, n0: usize, n_max: usize, rtol: f64) -> Result<(Vec<Complex64>, usize)>
where
    F: Fn(f64) -> Vec<Complex64>,
{
    let eval = |n: usize| {
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        for s in chebyshev_nodes(n) {
            for (a, v) in acc.iter_mut().zip(h(s)) {
                *a += v;
            }
        }
        acc.iter().map(|a| a * (PI / n as f64)).collect::<Vec<_>>()
    };
    let mut n = n0;
    let mut prev = eval(n);
    loop {
        let n2 = 2 * n;
        let cur = eval(n2);
        let scale = cur.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        let diff = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if diff <= rtol * scale {
            return Ok((cur, n2));
        }
        if n2 >= n_max {
            return Err(Error::Quadrature(format!(
                "Gauss-Chebyshev relative change {:.3e} at {} nodes",
                diff / scale,
                n2
            )));
        }
        n = n2;
        prev = cur;
    }
}

// Gauss-Kronrod 7-15 tables as published, beyond binary64 precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F>(f: &F, a: f64, b: f64, dim: usize) -> (Vec<Complex64>, f64)
where
    F: Fn(f64) -> Vec<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let mut k = vec![zero; dim];
    let mut g = vec![zero; dim];
    let fc = f(c);
    for i in 0..dim {
        k[i] = fc[i] * WGK[7];
        g[i] = fc[i] * WG[3];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for i in 0..dim {
            let s = f1[i] + f2[i];
            k[i] += s * WGK[j];
            if j % 2 == 1 {
                g[i] += s * WG[j / 2];
            }
        }
    }
    let err = k.iter().zip(&g).map(|(a, b)| ((a - b) * h).norm()).fold(0.0, f64::max);
    (k.iter().map(|v| v * h).collect(), err)
}

struct Seg {
    a: f64,
    b: f64,
    val: Vec<Complex64>,
    err: f64,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive Gauss-Kronrod (7/15) for a vector-valued integrand on `[a, b]`.
pub fn adaptive_gk<F>(f: F, a: f64, b: f64, dim: usize, atol: f64, rtol: f64, max_segments: usize) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Vec<Complex64>,
{
    let (val, err) = gk15(&f, a, b, dim);
    let mut heap = BinaryHeap::new();
    heap.push(Seg { a, b, val, err });
    let mut total_err = err;
    loop {
        let total: Vec<Complex64> = {
            let mut t = vec![Complex64::new(0.0, 0.0); dim];
            for s in heap.iter() {
                for (x, v) in t.iter_mut().zip(&s.val) {
                    *x += v;
                }
            }
            t
        };
        let scale = total.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if total_err <= atol.max(rtol * scale) {
            return Ok(total);
        }
        if heap.len() >= max_segments {
            return Err(Error::Quadrature(format!("adaptive Gauss-Kronrod error {:.3e} after {} segments", total_err, heap.len())));
        }
        let worst = heap.pop().expect("non-empty");
        let m = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&f, worst.a, m, dim);
        let (v2, e2) = gk15(&f, m, worst.b, dim);
        total_err += e1 + e2 - worst.err;
        heap.push(Seg { a: worst.a, b: m, val: v1, err: e1 });
        heap.push(Seg { a: m, b: worst.b, val: v2, err: e2 });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_integrates_arcsine_weight() {
        // int 1/sqrt(1-s^2) * 1/(2-s) ds = pi/sqrt(3)
        let (v, n) = gauss_chebyshev_vec(|s| vec![Complex64::new(1.0 / (2.0 - s), 0.0)], 1, 8, 4096, 1e-13).unwrap();
        assert!((v[0].re - PI / 3f64.sqrt()).abs() < 1e-13, "n={n}");
    }

    #[test]
    fn kronrod_handles_sqrt_endpoint() {
        let v = adaptive_gk(|x| vec![Complex64::new(x.sqrt(), 0.0)], 0.0, 1.0, 1, 1e-13, 1e-13, 200).unwrap();
        assert!((v[0].re - 2.0 / 3.0).abs() < 1e-12);
    }
}
