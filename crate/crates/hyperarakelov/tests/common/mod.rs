//! Curves and contexts shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::OnceLock;

use hyperarakelov::curve::Curve;
use hyperarakelov::invariants::Context;
use hyperarakelov::periods::PeriodConfig;
use hyperarakelov::theta::ThetaConfig;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `x^d + lin x + cst` through its coefficients.
pub fn trinomial(d: usize, lin: f64, cst: f64) -> Curve {
    let mut co = vec![c(0.0, 0.0); d + 1];
    co[0] = c(1.0, 0.0);
    co[d - 1] = c(lin, 0.0);
    co[d] = c(cst, 0.0);
    Curve::from_coefficients(&co, None).unwrap()
}

pub fn x5m1() -> Curve {
    trinomial(5, 0.0, -1.0)
}

pub fn x5mx() -> Curve {
    trinomial(5, -1.0, 0.0)
}

pub fn x7mx() -> Curve {
    trinomial(7, -1.0, 0.0)
}

pub fn generic_g2_roots() -> Vec<Complex64> {
    vec![c(-1.3, 0.2), c(-0.4, -0.9), c(0.1, 0.6), c(0.9, -0.3), c(1.6, 0.4)]
}

pub fn generic_g2() -> Curve {
    Curve::from_roots(generic_g2_roots(), None).unwrap()
}

pub fn generic_g3() -> Curve {
    let roots = (0..7).map(|k| Complex64::from_polar(1.0 + 0.15 * (k % 3) as f64, 2.0 * PI * k as f64 / 7.0 + 0.1 * k as f64)).collect();
    Curve::from_roots(roots, None).unwrap()
}

pub fn context(curve: &Curve) -> Context {
    Context::new(curve, &PeriodConfig::default(), ThetaConfig::default()).unwrap()
}

pub fn x5m1_context() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(|| context(&x5m1()))
}

pub fn generic_context() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(|| context(&generic_g2()))
}

pub fn g3_context() -> &'static Context {
    static CTX: OnceLock<Context> = OnceLock::new();
    CTX.get_or_init(|| context(&generic_g3()))
}

/// Roots of `curve` moved by `shift[k] * scale`.
pub fn perturbed(curve: &Curve, shift: &[(f64, f64)], scale: f64) -> Curve {
    let roots = curve.roots().iter().zip(shift).map(|(&a, &(re, im))| a + c(re, im) * scale).collect();
    Curve::from_roots(roots, None).unwrap()
}

/// Reference table of `sigma_g` for `g = 1..4`, in TeX notation. The `g = 4` row carries
/// `z_3^3 z_4` where the reference row has `z_3^2 z_4`, a term of the wrong weighted degree.
pub const SIGMA_TABLE: [&str; 4] = [
    r"z_1",
    r"-z_1 + \frac{1}{3}z_2^3",
    r"z_1z_3 - z_2^2 - \frac{1}{3} z_2 z_3^3 + \frac{1}{45} z_3^6",
    r"z_1z_3 - z_2^2 -z_3^3z_4 + z_2z_3z_4^2 - \frac{1}{3} z_1z_4^3 + \frac{1}{15}z_2 z_4^5 - \frac{1}{105} z_3 z_4^7 + \frac{1}{4725}z_4^{10}",
];

/// Parses a sum of signed monomials `[\frac{a}{b}] z_i^e z_j ...` in `g` variables.
pub fn parse_tex_poly(s: &str, g: usize) -> hyperarakelov::symfunc::SymPoly {
    use hyperarakelov::symfunc::{rat, SymPoly};
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let b = s.as_bytes();
    let mut i = 0;
    let number = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        s[start..*i].parse::<i64>().unwrap()
    };
    let braced_or_digit = |i: &mut usize| {
        if b[*i] == b'{' {
            *i += 1;
            let v = number(i);
            assert_eq!(b[*i], b'}');
            *i += 1;
            v
        } else {
            let v = (b[*i] - b'0') as i64;
            *i += 1;
            v
        }
    };
    let mut out = SymPoly::zero(g);
    while i < b.len() {
        let mut sign = 1;
        if b[i] == b'+' || b[i] == b'-' {
            sign = if b[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        let (mut num, mut den) = (1, 1);
        if s[i..].starts_with(r"\frac") {
            i += 5;
            num = braced_or_digit(&mut i);
            den = braced_or_digit(&mut i);
        }
        let mut e = vec![0u32; g];
        while i < b.len() && b[i] == b'z' {
            assert_eq!(b[i + 1], b'_');
            i += 2;
            let k = braced_or_digit(&mut i) as usize;
            let mut pow = 1;
            if i < b.len() && b[i] == b'^' {
                i += 1;
                pow = braced_or_digit(&mut i) as u32;
            }
            e[k - 1] += pow;
        }
        out = &out + &SymPoly::monomial(e, rat(sign * num, den));
    }
    out
}
