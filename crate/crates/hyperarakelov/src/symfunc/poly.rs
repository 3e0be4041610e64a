use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Keys are exponent vectors of length `arity`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl SymPoly {
    pub fn zero(arity: usize) -> Self {
        SymPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, BigRational::one())
    }

    /// The variable `x_i` (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: BigRational) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigRational)>>(arity: usize, it: I) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in it {
            assert_eq!(e.len(), arity, "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms.get(exponents).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        SymPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.arity);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.arity);
        let mut s = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(e, c)| {
                c.to_f64().unwrap() * x.iter().zip(e).map(|(xi, &k)| xi.powi(k as i32)).product::<f64>()
            })
            .sum()
    }

    /// Replace variable `i` by `subs[i]`; all substitutes share one arity.
    pub fn substitute(&self, subs: &[SymPoly]) -> SymPoly {
        assert_eq!(subs.len(), self.arity);
        let arity = subs.first().map(|p| p.arity).unwrap_or(0);
        let mut cache: Vec<Vec<SymPoly>> = subs.iter().map(|s| vec![SymPoly::one(arity), s.clone()]).collect();
        let mut out = SymPoly::zero(arity);
        for (e, c) in &self.terms {
            let mut t = SymPoly::constant(arity, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Terms of minimal total degree.
    pub fn lowest_degree_part(&self) -> SymPoly {
        let Some(dmin) = self.terms.keys().map(|e| e.iter().sum::<u32>()).min() else {
            return self.clone();
        };
        SymPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == dmin)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Set of weighted degrees `sum w_i e_i` over all terms.
    pub fn weighted_degrees(&self, weights: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(a, b)| a * b).sum())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> SymPoly {
        SymPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.swap(i, j);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Invariant under every adjacent transposition.
    pub fn is_symmetric(&self) -> bool {
        (1..self.arity).all(|i| self.swap_vars(i - 1, i) == *self)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"coeff": rat_string(c), "exponents": e}))
            .collect();
        json!({"arity": self.arity, "terms": terms})
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        assert_eq!(self.arity, rhs.arity);
        let mut out = SymPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({})*{}", a, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Determinant by Laplace expansion with memoised minors (exact, no division).
pub fn det(m: &[Vec<SymPoly>], arity: usize) -> SymPoly {
    use std::collections::HashMap;
    let n = m.len();
    if n == 0 {
        return SymPoly::one(arity);
    }
    assert!(n <= 24, "matrix too large for minor expansion");
    fn go(m: &[Vec<SymPoly>], row: usize, mask: u32, memo: &mut HashMap<u32, SymPoly>, arity: usize) -> SymPoly {
        let n = m.len();
        if row == n {
            return SymPoly::one(arity);
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = SymPoly::zero(arity);
        let mut pos = 0;
        for c in 0..n {
            if mask & (1 << c) != 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(m, row + 1, mask | (1 << c), memo, arity);
                if !minor.is_zero() {
                    let t = &m[row][c] * &minor;
                    acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
                }
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    go(m, 0, 0, &mut memo, arity)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let x = SymPoly::var(2, 0);
        let y = SymPoly::var(2, 1);
        let p = &(&x + &y).pow(2) - &(&x * &y).scale(&rat(2, 1));
        assert_eq!(p, &x.pow(2) + &y.pow(2));
        assert_eq!(p.eval(&[rat(1, 2), rat(3, 1)]), rat(37, 4));
        assert!(p.is_symmetric());
        assert!(!(&x + &y.pow(2)).is_symmetric());
    }

    #[test]
    fn substitute_composes() {
        let x = SymPoly::var(1, 0);
        let p = &x.pow(2) + &SymPoly::one(1);
        let q = p.substitute(&[&x + &SymPoly::one(1)]);
        assert_eq!(q.coefficient(&[2]), rat(1, 1));
        assert_eq!(q.coefficient(&[1]), rat(2, 1));
        assert_eq!(q.coefficient(&[0]), rat(2, 1));
    }

    #[test]
    fn determinants() {
        let x = SymPoly::var(1, 0);
        let one = SymPoly::one(1);
        let m = vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]];
        assert_eq!(det(&m, 1), &x.pow(2) - &one);
        let b: Vec<Vec<BigInt>> = vec![
            vec![2.into(), 0.into(), 1.into()],
            vec![1.into(), 3.into(), 2.into()],
            vec![1.into(), 1.into(), 2.into()],
        ];
        assert_eq!(det_bigint(&b), BigInt::from(6));
    }
}
