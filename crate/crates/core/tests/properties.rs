//! Cross-module invariants on random inputs.

use proptest::prelude::*;

use quatk::arith::Integer;
use quatk::kring::{embed_to_r, relations_for, KElement};
use quatk::lens::restrict;
use quatk::linalg::{smith_normal_form, IntMatrix};
use quatk::rep_ring::{character_of, decompose, multiply, GroupParams, RepElement};

fn group() -> impl Strategy<Value = GroupParams> {
    (3u32..=5).prop_map(|n| GroupParams::new(n).unwrap())
}

fn rep(params: GroupParams) -> impl Strategy<Value = RepElement> {
    proptest::collection::vec(-6i64..=6, params.rank()).prop_map(move |v| {
        RepElement::from_coeffs(params, v.into_iter().map(Integer::from).collect())
    })
}

fn kelement(params: GroupParams) -> impl Strategy<Value = KElement> {
    proptest::collection::vec(-5i64..=5, params.k() + 3).prop_map(move |v| {
        let mut e = KElement::zero(params);
        e.c0 = v[0].into();
        e.a1 = v[1].into();
        e.a2 = v[2].into();
        for (slot, c) in e.phi.iter_mut().zip(&v[3..]) {
            *slot = (*c).into();
        }
        e
    })
}

fn triple<T: std::fmt::Debug + Clone>(
    f: impl Fn(GroupParams) -> BoxedStrategy<T> + Clone + 'static,
) -> impl Strategy<Value = (T, T, T)> {
    group().prop_flat_map(move |g| (f(g), f(g), f(g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kring_multiplication_matches_rep_ring((a, b, c) in triple(|g| kelement(g).boxed())) {
        let set = relations_for(a.params()).unwrap();
        let ab = set.multiply_nf(&a, &b).unwrap();
        prop_assert_eq!(embed_to_r(&ab), multiply(&embed_to_r(&a), &embed_to_r(&b)));
        let left = set.multiply_nf(&ab, &c).unwrap();
        let right = set.multiply_nf(&a, &set.multiply_nf(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(set.multiply_nf(&a, &b).unwrap(), set.multiply_nf(&b, &a).unwrap());
    }

    #[test]
    fn kelement_json_round_trip(a in group().prop_flat_map(kelement)) {
        prop_assert_eq!(KElement::from_json(a.params(), &a.to_json()).unwrap(), a);
    }

    #[test]
    fn characters_and_restriction_are_ring_maps((a, b, _c) in triple(|g| rep(g).boxed())) {
        let ab = multiply(&a, &b);
        let chi = character_of(&a).pointwise_mul(&character_of(&b)).unwrap();
        prop_assert_eq!(&decompose(&chi).unwrap(), &ab);
        prop_assert_eq!(restrict(&ab), restrict(&a).try_mul(&restrict(&b)).unwrap());
        prop_assert_eq!(multiply(&a, &b), multiply(&b, &a));
    }

    #[test]
    fn distributivity((a, b, c) in triple(|g| rep(g).boxed())) {
        prop_assert_eq!(multiply(&a, &(&b + &c)), &multiply(&a, &b) + &multiply(&a, &c));
    }

    #[test]
    fn smith_form_certificate(rows in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 4), 1..5)) {
        let m = IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect());
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]) == Integer::from(0));
        }
    }
}
