use std::fmt;

use crate::error::{Error, Result};

/// An integer partition stored as non-increasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Accepts parts in any order; zero parts are dropped.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let mut p: Vec<u32> = parts.into_iter().filter(|&x| x > 0).collect();
        if p.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{:?} is not non-increasing", p)));
        }
        p.shrink_to_fit();
        Ok(Partition(p))
    }

    pub fn staircase(g: u32) -> Self {
        Partition((1..=g).rev().collect())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let m = self.part(0);
        Partition((1..=m).map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32).collect())
    }

    /// Multiplicity vector `(i_1, ..., i_d)` with `d = size`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let d = self.size() as usize;
        let mut m = vec![0; d];
        for &p in &self.0 {
            m[p as usize - 1] += 1;
        }
        m
    }

    pub fn from_multiplicities(m: &[u32]) -> Self {
        let mut parts = Vec::new();
        for (a, &k) in m.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(a as u32 + 1, k as usize));
        }
        Partition(parts)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}
