use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::partition::Partition;
use super::poly::{det, SymPoly};
use crate::error::{Error, Result};

/// Elementary symmetric polynomial `e_r` in `arity` variables.
pub fn elementary(r: i64, arity: usize) -> SymPoly {
    if r < 0 || r as usize > arity {
        return SymPoly::zero(arity);
    }
    let r = r as usize;
    let mut out = SymPoly::zero(arity);
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let mut e = vec![0u32; arity];
        for &i in &idx {
            e[i] = 1;
        }
        out = &out + &SymPoly::monomial(e, BigRational::one());
        // next combination
        let mut k = r;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < arity - r + k {
                idx[k] += 1;
                for j in k + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Power sum `p_r` in `arity` variables.
pub fn power_sum(r: u32, arity: usize) -> SymPoly {
    let mut out = SymPoly::zero(arity);
    for i in 0..arity {
        let mut e = vec![0; arity];
        e[i] = r;
        out = &out + &SymPoly::monomial(e, BigRational::one());
    }
    out
}

/// Schur polynomial `S_pi(x_1..x_arity)` via the dual Jacobi-Trudi determinant
/// `det(e_{pi'_k - k + l})`, sized by the number of columns of `pi`.
pub fn schur(pi: &Partition, arity: usize) -> Result<SymPoly> {
    if arity < pi.len() {
        return Err(Error::InsufficientArity { arity, length: pi.len() });
    }
    let conj = pi.conjugate();
    let n = conj.len();
    let es: Vec<SymPoly> = (0..=(pi.size() as i64 + n as i64)).map(|r| elementary(r, arity)).collect();
    let e = |r: i64| if r < 0 { SymPoly::zero(arity) } else { es[r as usize].clone() };
    let m: Vec<Vec<SymPoly>> = (1..=n)
        .map(|k| (1..=n).map(|l| e(conj.part(k - 1) as i64 - k as i64 + l as i64)).collect())
        .collect();
    Ok(det(&m, arity))
}

/// `S_pi(1, ..., 1)` in `d` variables: `prod_{k<l} (pi_k - pi_l + l - k)/(l - k)`.
pub fn schur_at_ones(pi: &Partition, d: usize) -> BigRational {
    let mut acc = BigRational::one();
    for k in 0..d {
        for l in k + 1..d {
            let num = pi.part(k) as i64 - pi.part(l) as i64 + (l - k) as i64;
            acc *= BigRational::new(BigInt::from(num), BigInt::from((l - k) as i64));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::poly::rat;

    #[test]
    fn small_schur_polynomials() {
        // S_(2,1)(x1,x2) = x1^2 x2 + x1 x2^2
        let s = schur(&Partition::new(vec![2, 1]).unwrap(), 2).unwrap();
        let expect = SymPoly::from_terms(2, vec![(vec![2, 1], rat(1, 1)), (vec![1, 2], rat(1, 1))]);
        assert_eq!(s, expect);
        // S_(2) = h_2
        let h2 = schur(&Partition::new(vec![2]).unwrap(), 2).unwrap();
        assert_eq!(h2.coefficient(&[2, 0]), rat(1, 1));
        assert_eq!(h2.coefficient(&[1, 1]), rat(1, 1));
        assert!(schur(&Partition::new(vec![1, 1, 1]).unwrap(), 2).is_err());
    }

    #[test]
    fn staircase_two_in_power_sums() {
        // S_(2,1) = (p1^3 - p3)/3 in three variables
        let s = schur(&Partition::staircase(2), 3).unwrap();
        let p1 = power_sum(1, 3);
        let p3 = power_sum(3, 3);
        assert_eq!(s, (&p1.pow(3) - &p3).scale(&rat(1, 3)));
    }
}
