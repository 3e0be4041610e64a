use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symfunc::binomial;

/// Half-integer characteristic `[eta'; eta'']`; entries store twice the value (0 or 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaChar {
    pub top: Vec<u8>,
    pub bottom: Vec<u8>,
}

impl ThetaChar {
    pub fn zero(g: usize) -> Self {
        ThetaChar { top: vec![0; g], bottom: vec![0; g] }
    }

    pub fn new(top: Vec<u8>, bottom: Vec<u8>) -> Self {
        assert_eq!(top.len(), bottom.len());
        ThetaChar { top: top.into_iter().map(|v| v & 1).collect(), bottom: bottom.into_iter().map(|v| v & 1).collect() }
    }

    pub fn genus(&self) -> usize {
        self.top.len()
    }

    /// Sum modulo 1.
    pub fn add(&self, o: &ThetaChar) -> ThetaChar {
        ThetaChar {
            top: self.top.iter().zip(&o.top).map(|(a, b)| a ^ b).collect(),
            bottom: self.bottom.iter().zip(&o.bottom).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// `e(eta) = exp(4 pi i eta' . eta'')`, returned as `+1` or `-1`.
    pub fn parity(&self) -> i8 {
        let s: u32 = self.top.iter().zip(&self.bottom).map(|(a, b)| (a & b) as u32).sum();
        if s.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn top_f64(&self) -> Vec<f64> {
        self.top.iter().map(|&v| 0.5 * v as f64).collect()
    }

    pub fn bottom_f64(&self) -> Vec<f64> {
        self.bottom.iter().map(|&v| 0.5 * v as f64).collect()
    }

    /// All `2^{2g}` characteristics.
    pub fn all(g: usize) -> Vec<ThetaChar> {
        (0u32..(1 << (2 * g)))
            .map(|bits| {
                let top = (0..g).map(|i| ((bits >> i) & 1) as u8).collect();
                let bottom = (0..g).map(|i| ((bits >> (g + i)) & 1) as u8).collect();
                ThetaChar { top, bottom }
            })
            .collect()
    }

    /// Parse `"a1 a2 ... / b1 b2 ..."` with entries `0`, `1/2` or `1` (twice the value also accepted as bits).
    pub fn parse(s: &str) -> Option<ThetaChar> {
        let (t, b) = s.split_once(';').or_else(|| s.split_once('/'))?;
        let bits = |p: &str| -> Option<Vec<u8>> {
            p.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| match x {
                    "0" => Some(0),
                    "1" | "0.5" | "h" => Some(1),
                    _ => None,
                })
                .collect()
        };
        let (top, bottom) = (bits(t)?, bits(b)?);
        (top.len() == bottom.len() && !top.is_empty()).then(|| ThetaChar::new(top, bottom))
    }
}

impl fmt::Display for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u8]| v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "[{};{}]/2", join(&self.top), join(&self.bottom))
    }
}

/// The characteristics `eta_1..eta_{2g+1}` attached to the ordered branch points, and the
/// combinatorics of the modular discriminant.
#[derive(Clone, Debug)]
pub struct CharTable {
    pub g: usize,
    pub etas: Vec<ThetaChar>,
}

impl CharTable {
    pub fn new(g: usize) -> Self {
        let mut etas = Vec::with_capacity(2 * g + 1);
        for k in 1..=g + 1 {
            // eta_{2k-1}
            let mut top = vec![0u8; g];
            if k <= g {
                top[k - 1] = 1;
            }
            let bottom = (0..g).map(|i| u8::from(i < k - 1)).collect();
            etas.push(ThetaChar { top, bottom });
            if k <= g {
                // eta_{2k}
                let mut top = vec![0u8; g];
                top[k - 1] = 1;
                let bottom = (0..g).map(|i| u8::from(i < k)).collect();
                etas.push(ThetaChar { top, bottom });
            }
        }
        CharTable { g, etas }
    }

    /// `eta_S` for `S` a set of 0-based indices into the ordered branch points.
    pub fn eta_set(&self, s: &[usize]) -> ThetaChar {
        s.iter().fold(ThetaChar::zero(self.g), |acc, &k| acc.add(&self.etas[k]))
    }

    /// `U = {1, 3, ..., 2g+1}` as 0-based indices.
    pub fn u_set(&self) -> Vec<usize> {
        (0..=self.g).map(|k| 2 * k).collect()
    }

    /// Symmetric difference `S o T` of two sorted index sets.
    pub fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = a.iter().filter(|x| !b.contains(x)).chain(b.iter().filter(|x| !a.contains(x))).cloned().collect();
        v.sort_unstable();
        v
    }

    /// All `(g+1)`-subsets of `{0, ..., 2g}` in lexicographic order.
    pub fn t_family(&self) -> Vec<Vec<usize>> {
        let n = 2 * self.g + 1;
        let k = self.g + 1;
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.clone());
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// `{eta_{T o U} : T}` in the order of [`t_family`](Self::t_family).
    pub fn discriminant_chars(&self) -> Vec<ThetaChar> {
        let u = self.u_set();
        self.t_family().iter().map(|t| self.eta_set(&Self::sym_diff(t, &u))).collect()
    }

    pub fn r(&self) -> u64 {
        binom(2 * self.g + 1, self.g + 1)
    }

    pub fn n(&self) -> u64 {
        binom(2 * self.g, self.g + 1)
    }

    pub fn m(&self) -> u64 {
        binom(2 * self.g + 2, self.g)
    }
}

fn binom(n: usize, k: usize) -> u64 {
    binomial(n as i64, k as i64).try_into().expect("small binomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_table() {
        let t = CharTable::new(2);
        assert_eq!(t.etas.len(), 5);
        assert_eq!(t.etas[0], ThetaChar::new(vec![1, 0], vec![0, 0]));
        assert_eq!(t.etas[1], ThetaChar::new(vec![1, 0], vec![1, 0]));
        assert_eq!(t.etas[2], ThetaChar::new(vec![0, 1], vec![1, 0]));
        assert_eq!(t.etas[3], ThetaChar::new(vec![0, 1], vec![1, 1]));
        assert_eq!(t.etas[4], ThetaChar::new(vec![0, 0], vec![1, 1]));
        assert_eq!((t.r(), t.n(), t.m()), (10, 4, 15));
        let chars = t.discriminant_chars();
        assert_eq!(chars.len(), 10);
        assert!(chars.iter().all(|c| c.is_even()));
        let mut uniq = chars.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 10);
    }

    #[test]
    fn eta_set_is_additive() {
        let t = CharTable::new(3);
        assert_eq!(t.eta_set(&[]), ThetaChar::zero(3));
        let (s1, s2) = (vec![0, 2, 5], vec![2, 3, 6]);
        assert_eq!(t.eta_set(&CharTable::sym_diff(&s1, &s2)), t.eta_set(&s1).add(&t.eta_set(&s2)));
        assert_eq!(t.eta_set(&t.u_set()).genus(), 3);
    }

    #[test]
    fn parse_round_trip() {
        let c = ThetaChar::parse("1 0 ; 1/2 1").is_none();
        assert!(c);
        let c = ThetaChar::parse("1,0;0,1").unwrap();
        assert_eq!(c, ThetaChar::new(vec![1, 0], vec![0, 1]));
    }
}
