use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::newton::newton_expansion;
use super::partition::Partition;
use super::poly::{det, det_bigint, SymPoly};
use crate::error::{Error, Result};

/// `S_g` as a polynomial in the odd power sums; variable `j` stands for `p_{2j+1}`.
pub fn s_g(g: u32) -> Result<SymPoly> {
    if g < 1 {
        return Err(Error::GenusTooSmall { min: 1, got: g as usize });
    }
    let exp = newton_expansion(&Partition::staircase(g));
    let mut terms = Vec::new();
    for (m, c) in &exp.terms {
        let mut e = vec![0u32; g as usize];
        for (a, &k) in m.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let part = a as u32 + 1;
            if part.is_multiple_of(2) || part > 2 * g - 1 {
                return Err(Error::NotOddPowerSums(format!("p_{part} appears with coefficient {c}")));
            }
            e[(part as usize - 1) / 2] = k;
        }
        terms.push((e, c.clone()));
    }
    Ok(SymPoly::from_terms(g as usize, terms))
}

/// `sigma_g(z_1..z_g) = s_g(z_g, 3 z_{g-1}, ..., (2g-1) z_1)`.
pub fn sigma_g(g: u32) -> Result<SymPoly> {
    let s = s_g(g)?;
    let gu = g as usize;
    let terms = s.terms().map(|(e, c)| {
        let mut coeff = c.clone();
        let mut z = vec![0u32; gu];
        for (j, &k) in e.iter().enumerate() {
            let scale = BigInt::from(2 * j as u64 + 1);
            coeff *= BigRational::from_integer(num_traits::pow(scale, k as usize));
            z[gu - 1 - j] = k;
        }
        (z, coeff)
    });
    Ok(SymPoly::from_terms(gu, terms.collect::<Vec<_>>()))
}

/// Hankel determinant `det(z_{i+j-1})` of size `(g+1)/2` (g odd) or `g/2` (g even).
pub fn hankel(g: u32) -> SymPoly {
    let gu = g as usize;
    let m = if g % 2 == 1 { gu.div_ceil(2) } else { gu / 2 };
    let mat: Vec<Vec<SymPoly>> = (0..m).map(|i| (0..m).map(|j| SymPoly::var(gu, i + j)).collect()).collect();
    det(&mat, gu)
}

/// Weights `2(g-k)+1` making `sigma_g` homogeneous of degree `g(g+1)/2`.
pub fn sigma_weights(g: u32) -> Vec<u32> {
    (1..=g).map(|k| 2 * (g - k) + 1).collect()
}

/// `sigma_g` at `z_k = g / (2(g-k)+1)`; equals `S_g(1,..,1) = 2^{g(g-1)/2}`.
pub fn sigma_leading_scalar(g: u32) -> Result<BigRational> {
    let s = sigma_g(g)?;
    let z: Vec<BigRational> = sigma_weights(g)
        .iter()
        .map(|&w| BigRational::new(BigInt::from(g), BigInt::from(w)))
        .collect();
    Ok(s.eval(&z))
}

/// Binomial determinant `det(C(2g-2k, g-l))_{k,l=1..g-1}` from the Wronskian expansion.
pub fn binomial_wronskian_det(g: u32) -> Result<BigInt> {
    if g < 2 {
        return Err(Error::GenusTooSmall { min: 2, got: g as usize });
    }
    let n = g as i64 - 1;
    let m: Vec<Vec<BigInt>> = (1..=n)
        .map(|k| (1..=n).map(|l| binomial(2 * g as i64 - 2 * k, g as i64 - l)).collect())
        .collect();
    Ok(det_bigint(&m))
}

/// Leading coefficient of the Wronskian of `z^{2(g-l)}`, `l = 1..g`, with `1/i!` row scaling.
pub fn power_wronskian_det(g: u32) -> BigInt {
    let gi = g as i64;
    let m: Vec<Vec<BigInt>> = (0..gi)
        .map(|i| (1..=gi).map(|l| binomial(2 * gi - 2 * l, i)).collect())
        .collect();
    det_bigint(&m)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Canonical JSON document for `sigma-poly --genus g`.
pub fn sigma_report(g: u32) -> Result<Value> {
    let sigma = sigma_g(g)?;
    Ok(json!({
        "genus": g,
        "hankel": hankel(g).to_json(),
        "leading_scalar": super::poly::rat_string(&sigma_leading_scalar(g)?),
        "s": s_g(g)?.to_json(),
        "schema_version": 1,
        "sigma": sigma.to_json(),
        "sigma_text": sigma.to_string(),
        "weights": sigma_weights(g),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::poly::rat;
    use num_traits::Signed;

    #[test]
    fn genus_two_closed_form() {
        let s = sigma_g(2).unwrap();
        let expect = SymPoly::from_terms(2, vec![(vec![1, 0], rat(-1, 1)), (vec![0, 3], rat(1, 3))]);
        assert_eq!(s, expect);
        assert_eq!(s.to_string(), "-z1 + (1/3)*z2^3");
    }

    #[test]
    fn binomial_dets() {
        assert_eq!(binomial_wronskian_det(2).unwrap(), BigInt::from(2));
        assert_eq!(binomial_wronskian_det(3).unwrap(), BigInt::from(8));
        for g in 2..=6 {
            assert_eq!(power_wronskian_det(g).abs(), binomial_wronskian_det(g).unwrap().abs());
        }
    }

    #[test]
    fn hankel_shapes() {
        assert_eq!(hankel(1), SymPoly::var(1, 0));
        assert_eq!(hankel(2), SymPoly::var(2, 0));
        let h3 = hankel(3);
        let z = |i| SymPoly::var(3, i);
        assert_eq!(h3, &(&z(0) * &z(2)) - &z(1).pow(2));
    }
}
