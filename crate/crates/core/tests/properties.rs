use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use reinhardt::classify::odd_dihedral_compositions;
use reinhardt::notation::expand;
use reinhardt::residue::ResidueTable;
use reinhardt::{classify, cyclotomic, Classification, Composition, IntPolynomial, Polynomial, SignVector};

fn odd_composition(max_n: usize) -> impl Strategy<Value = Composition> {
    prop::collection::vec(1usize..8, 1..12)
        .prop_filter("odd part count", |v| v.len() % 2 == 1)
        .prop_filter("size", move |v| v.iter().sum::<usize>() <= max_n)
        .prop_map(|v| Composition::new(v).unwrap())
}

fn small_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 0..10)
}

/// Compositions of `m` into an odd number of parts, as ascending cut sets.
fn all_odd_compositions(m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << (m - 1))
        .filter(|cuts| cuts.count_ones() % 2 == 0)
        .map(|cuts| {
            let mut parts = Vec::new();
            let mut last = 0;
            for i in 0..m - 1 {
                if cuts >> i & 1 == 1 {
                    parts.push(i + 1 - last);
                    last = i + 1;
                }
            }
            parts.push(m - last);
            parts
        })
        .collect()
}

#[test]
fn dihedral_count_matches_brute_force() {
    for m in 1..=16 {
        let classes: BTreeSet<Composition> = all_odd_compositions(m)
            .into_iter()
            .map(|p| Composition::new(p).unwrap().canonicalize())
            .collect();
        assert_eq!(
            odd_dihedral_compositions(m as u64),
            num_rational::BigRational::from_integer(BigInt::from(classes.len())),
            "m = {m}"
        );
    }
}

proptest! {
    #[test]
    fn canonical_form_is_a_class_invariant(c in odd_composition(60)) {
        let canon = c.canonicalize();
        prop_assert!(canon.is_canonical());
        prop_assert_eq!(canon.canonicalize(), canon.clone());
        for image in c.dihedral_images() {
            prop_assert_eq!(image.canonicalize(), canon.clone());
            prop_assert!(image <= canon);
        }
    }

    #[test]
    fn sign_vector_round_trip(c in odd_composition(60)) {
        let v = c.to_sign_vector();
        prop_assert_eq!(v.n(), c.n());
        prop_assert_eq!(v.to_composition(), c.clone());
        prop_assert!(SignVector::new(v.entries().to_vec()).is_ok());
    }

    #[test]
    fn text_round_trip(c in odd_composition(60)) {
        let text = c.to_string();
        prop_assert_eq!(expand(&text).unwrap(), c.parts().to_vec());
        prop_assert_eq!(text.parse::<Composition>().unwrap(), c);
    }

    #[test]
    fn run_length_groups_repeat(parts in prop::collection::vec(1usize..6, 1..5), d in 1usize..6) {
        let inner = parts.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        let expanded = expand(&format!("[({inner})^{d}]")).unwrap();
        prop_assert_eq!(expanded, parts.repeat(d));
    }

    #[test]
    fn machine_and_big_arithmetic_agree(a in small_poly(), b in small_poly()) {
        let (pa, pb) = (Polynomial::<i64>::from_i64(&a), Polynomial::<i64>::from_i64(&b));
        let (ba, bb) = (IntPolynomial::from_i64(&a), IntPolynomial::from_i64(&b));
        prop_assert_eq!(pa.checked_mul(&pb).unwrap().to_big(), &ba * &bb);
        prop_assert_eq!(pa.checked_add(&pb).unwrap().to_big(), &ba + &bb);
        prop_assert_eq!(&(&ba * &bb) - &(&bb * &ba), IntPolynomial::zero());
    }

    #[test]
    fn division_identity(a in small_poly(), m in 1u64..40) {
        let num = IntPolynomial::from_i64(&a);
        let den = cyclotomic(m);
        let (q, r) = num.div_rem(&den).unwrap();
        prop_assert!(r.degree() < den.degree());
        prop_assert_eq!(&(&q * &den) + &r, num.clone());
        prop_assert!((&num * &den).is_divisible_by(&den).unwrap());
    }

    #[test]
    fn residue_is_linear(c in odd_composition(40)) {
        let v = c.to_sign_vector();
        let table = ResidueTable::new(c.n());
        let direct = v.to_big_polynomial().div_rem(&cyclotomic(2 * c.n() as u64)).unwrap().1;
        prop_assert_eq!(table.residue_of(v.entries()), direct.clone());
        prop_assert_eq!(c.is_reinhardt(), direct.is_zero());
    }

    #[test]
    fn repeated_reinhardt_blocks_are_periodic(k in prop::collection::vec(1usize..5, 1..4), d in prop::sample::select(vec![3usize, 5, 7])) {
        prop_assume!(k.len() % 2 == 1);
        let c = Composition::new(k.repeat(d)).unwrap();
        prop_assume!(c.is_reinhardt());
        match classify(&c).unwrap() {
            Classification::Periodic { periods } => prop_assert!(periods.contains(&(c.n() / d))),
            Classification::Sporadic => prop_assert!(false, "{} should be periodic", c),
        }
    }
}
