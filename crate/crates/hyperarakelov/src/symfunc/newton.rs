use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::partition::Partition;
use super::poly::SymPoly;
use super::schur::power_sum;

/// Expansion of a Schur polynomial in products of power sums.
///
/// Keys are multiplicity vectors `i = (i_1, ..., i_d)` encoding `p^(i) = prod p_a^{i_a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonExpansion {
    pub degree: u32,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl NewtonExpansion {
    pub fn coefficient(&self, multiplicities: &[u32]) -> BigRational {
        self.terms.get(multiplicities).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Substitute the power sums of `arity` variables.
    pub fn to_polynomial(&self, arity: usize) -> SymPoly {
        let ps: Vec<SymPoly> = (1..=self.degree).map(|r| power_sum(r, arity)).collect();
        let mut out = SymPoly::zero(arity);
        for (m, c) in &self.terms {
            let mut t = SymPoly::constant(arity, c.clone());
            for (a, &k) in m.iter().enumerate() {
                if k > 0 {
                    t = &t * &ps[a].pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }
}

/// Size of the centraliser of a permutation with cycle type `i`.
pub fn centralizer_order(multiplicities: &[u32]) -> BigInt {
    let mut z = BigInt::one();
    for (a, &k) in multiplicities.iter().enumerate() {
        for j in 1..=k {
            z *= BigInt::from(j) * BigInt::from(a as u64 + 1);
        }
    }
    z
}

/// Irreducible character `chi^lambda(rho)` by the Murnaghan-Nakayama rule on beta-sets.
pub fn character(lambda: &Partition, rho: &Partition) -> i64 {
    if lambda.size() != rho.size() {
        return 0;
    }
    let l = lambda.len() as u32;
    let beta: Vec<u32> = lambda.parts().iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect();
    let mut memo = HashMap::new();
    mn(beta, rho.parts(), &mut memo)
}

fn mn(beta: Vec<u32>, parts: &[u32], memo: &mut HashMap<(Vec<u32>, usize), i64>) -> i64 {
    let Some((&r, rest)) = parts.split_first() else {
        return 1;
    };
    let key = (beta, parts.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let beta = &key.0;
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - r && c < b).count();
        let mut next = beta.clone();
        next[idx] = b - r;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let v = mn(next, rest, memo);
        total += if between % 2 == 0 { v } else { -v };
    }
    memo.insert(key, total);
    total
}

/// `S_pi = sum_i chi^pi(i) / z(i) * p^(i)` over cycle types `i` of `|pi|`.
pub fn newton_expansion(pi: &Partition) -> NewtonExpansion {
    let d = pi.size();
    let mut terms = BTreeMap::new();
    for rho in Partition::all(d) {
        let chi = character(pi, &rho);
        if chi == 0 {
            continue;
        }
        let m = rho.multiplicities();
        let z = centralizer_order(&m);
        terms.insert(m, BigRational::new(BigInt::from(chi), z));
    }
    NewtonExpansion { degree: d, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::poly::rat;
    use crate::symfunc::schur::schur;

    /// Coefficient of `x^{lambda+delta}` in `p_rho * a_delta`, by direct expansion.
    fn omega_bruteforce(lambda: &Partition, rho: &Partition) -> BigRational {
        let n = lambda.len().max(1);
        let mut prod = SymPoly::one(n);
        for &r in rho.parts() {
            prod = &prod * &power_sum(r, n);
        }
        for i in 0..n {
            for j in i + 1..n {
                prod = &prod * &(&SymPoly::var(n, i) - &SymPoly::var(n, j));
            }
        }
        let e: Vec<u32> = (0..n).map(|i| lambda.part(i) + (n - 1 - i) as u32).collect();
        prod.coefficient(&e)
    }

    #[test]
    fn spec_examples() {
        let e2 = newton_expansion(&Partition::new(vec![1, 1]).unwrap());
        assert_eq!(e2.coefficient(&[2, 0]), rat(1, 2));
        assert_eq!(e2.coefficient(&[0, 1]), rat(-1, 2));
        let s21 = newton_expansion(&Partition::new(vec![2, 1]).unwrap());
        assert_eq!(s21.coefficient(&[3, 0, 0]), rat(1, 3));
        assert_eq!(s21.coefficient(&[1, 1, 0]), rat(0, 1));
        assert_eq!(s21.coefficient(&[0, 0, 1]), rat(-1, 3));
        assert_eq!(centralizer_order(&[3, 0, 0]), BigInt::from(6));
        assert_eq!(centralizer_order(&[0, 0, 1]), BigInt::from(3));
    }

    #[test]
    fn characters_match_alternant_coefficients() {
        for d in 1..=5 {
            for lambda in Partition::all(d) {
                for rho in Partition::all(d) {
                    assert_eq!(
                        BigRational::from_integer(character(&lambda, &rho).into()),
                        omega_bruteforce(&lambda, &rho),
                        "lambda={lambda} rho={rho}"
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_formula() {
        // chi(1^d) counts standard tableaux: staircase 3 has 16
        let lam = Partition::staircase(3);
        let ones = Partition::new(vec![1; 6]).unwrap();
        assert_eq!(character(&lam, &ones), 16);
    }

    #[test]
    fn round_trip_small_degrees() {
        for d in 1..=6 {
            for lambda in Partition::all(d) {
                let n = d as usize;
                let lhs = newton_expansion(&lambda).to_polynomial(n);
                assert_eq!(lhs, schur(&lambda, n).unwrap(), "lambda={lambda}");
            }
        }
    }
}
