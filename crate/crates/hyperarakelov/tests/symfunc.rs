//! Exact identities of Schur, power-sum and sigma polynomials.

mod common;

use common::{parse_tex_poly, SIGMA_TABLE};
use hyperarakelov::symfunc::{
    binomial_wronskian_det, hankel, newton_expansion, rat, s_g, schur, schur_at_ones, sigma_g, sigma_leading_scalar,
    sigma_weights, Partition, SymPoly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

#[test]
fn sigma_matches_reference_table() {
    for (k, row) in SIGMA_TABLE.iter().enumerate() {
        let g = k as u32 + 1;
        assert_eq!(sigma_g(g).unwrap(), parse_tex_poly(row, g as usize), "g = {g}");
    }
}

#[test]
fn reference_genus_four_row_differs_in_one_term() {
    let reference = SIGMA_TABLE[3].replace("z_3^3z_4", "z_3^2z_4");
    let diff = &sigma_g(4).unwrap() - &parse_tex_poly(&reference, 4);
    assert_eq!(diff.len(), 2);
    assert!(diff.terms().any(|(e, c)| e == &vec![0, 0, 3, 1] && *c == rat(-1, 1)));
    assert!(diff.terms().any(|(e, c)| e == &vec![0, 0, 2, 1] && *c == rat(1, 1)));
}

#[test]
fn staircase_at_ones_is_power_of_two() {
    for g in 1..=6u32 {
        let expect = BigRational::from_integer(BigInt::one() << (g * (g - 1) / 2));
        assert_eq!(schur_at_ones(&Partition::staircase(g), g as usize), expect);
        assert_eq!(sigma_leading_scalar(g).unwrap(), expect);
    }
}

#[test]
fn binomial_wronskian_determinant() {
    for g in 2..=6u32 {
        let d = binomial_wronskian_det(g).unwrap();
        assert_eq!(d.abs(), BigInt::one() << (g * (g - 1) / 2), "g = {g}");
    }
}

#[test]
fn lowest_degree_part_is_hankel() {
    for g in 1..=6u32 {
        let low = sigma_g(g).unwrap().lowest_degree_part();
        let h = hankel(g);
        assert!(low == h || low == -&h, "g = {g}: {low} vs {h}");
    }
}

#[test]
fn sigma_is_weighted_homogeneous() {
    for g in 1..=6u32 {
        let degs = sigma_g(g).unwrap().weighted_degrees(&sigma_weights(g));
        assert!(degs.iter().all(|&d| d == g * (g + 1) / 2), "g = {g}: {degs:?}");
    }
}

#[test]
fn staircase_uses_odd_power_sums_only() {
    for g in 1..=6u32 {
        let exp = newton_expansion(&Partition::staircase(g));
        for m in exp.terms.keys() {
            assert!(m.iter().enumerate().all(|(a, &k)| k == 0 || a % 2 == 0), "g = {g}: {m:?}");
        }
        assert!(s_g(g).is_ok());
    }
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=4, 1..=4).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn ones(n: usize) -> Vec<BigRational> {
    vec![BigRational::one(); n]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn schur_is_symmetric(pi in partition(), extra in 0usize..=1) {
        let arity = pi.len() + extra;
        let s: SymPoly = schur(&pi, arity).unwrap();
        prop_assert!(s.is_symmetric());
        prop_assert_eq!(s.total_degree(), Some(pi.size()));
        prop_assert_eq!(s.eval(&ones(arity)), schur_at_ones(&pi, arity));
    }

    #[test]
    fn power_sum_expansion_round_trips(pi in partition()) {
        let arity = pi.len();
        let s = schur(&pi, arity).unwrap();
        prop_assert_eq!(newton_expansion(&pi).to_polynomial(arity), s);
    }

    #[test]
    fn conjugation_is_an_involution(pi in partition()) {
        prop_assert_eq!(pi.conjugate().conjugate(), pi.clone());
        prop_assert_eq!(pi.conjugate().size(), pi.size());
    }
}
