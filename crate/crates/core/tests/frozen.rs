//! Hand-computed values for the small groups, frozen as regression oracles.

use quatk::adams::{g_poly, psi_oracle, psi_series, PhiPoly};
use quatk::arith::{CyclotomicInt, Integer};
use quatk::cohomology::{h_group, predicted_reduced_order, CohGroup};
use quatk::kring::{relation3_redundancy, relations_for, KPoly, RelationId};
use quatk::lens::{restrict, LensElement};
use quatk::linalg::{smith_normal_form, IntMatrix};
use quatk::rep_ring::{character, decompose, multiply, ConjClass, GroupParams, Irrep, RepElement};
use quatk::truncated::{
    corollary2_table, order_of, torsion_order, ElementOrder, TruncatedQuotient,
};

fn p(n: u32) -> GroupParams {
    GroupParams::new(n).unwrap()
}

fn int(v: i64) -> Integer {
    Integer::from(v)
}

fn rep(params: GroupParams, coeffs: &[i64]) -> RepElement {
    RepElement::from_coeffs(params, coeffs.iter().map(|&c| int(c)).collect())
}

#[test]
fn group_parameters() {
    let q16 = p(4);
    assert_eq!((q16.k(), q16.order(), q16.rank()), (4, 16, 7));
    assert!(GroupParams::new(2).is_err());
}

#[test]
fn q8_products() {
    let g = p(3);
    let d1 = RepElement::basis(g, Irrep::D(1));
    assert_eq!(multiply(&d1, &d1), rep(g, &[1, 1, 1, 1, 0]));
    let eta2 = RepElement::basis(g, Irrep::Eta2);
    let eta3 = RepElement::basis(g, Irrep::Eta3);
    assert_eq!(multiply(&eta2, &eta3), RepElement::basis(g, Irrep::Eta1));
    assert_eq!(multiply(&eta2, &d1), d1);
}

#[test]
fn q16_products() {
    let g = p(4);
    let d = |i| RepElement::basis(g, Irrep::D(i));
    // d_1 d_3 = d_4 + d_2 = η2 + η3 + d_2
    assert_eq!(multiply(&d(1), &d(3)), rep(g, &[0, 0, 1, 1, 0, 1, 0]));
    assert_eq!(multiply(&RepElement::basis(g, Irrep::Eta2), &d(1)), d(3));
    assert_eq!(multiply(&d(2), &d(2)), rep(g, &[1, 1, 1, 1, 0, 0, 0]));
}

#[test]
fn characters_of_q16() {
    let g = p(4);
    let chi = character(g, Irrep::D(1));
    assert_eq!(
        chi.value(ConjClass::Identity),
        &CyclotomicInt::from_integer(4, int(2))
    );
    assert_eq!(
        chi.value(ConjClass::Central),
        &CyclotomicInt::from_integer(4, int(-2))
    );
    let mut expected = CyclotomicInt::zeta_pow(4, 1);
    expected.add_zeta_pow(-1, &int(1));
    assert_eq!(chi.value(ConjClass::Rotation(1)), &expected);
    assert!(chi.value(ConjClass::Y).is_zero());
    let eta2 = character(g, Irrep::Eta2);
    assert_eq!(
        eta2.value(ConjClass::Rotation(3)),
        &CyclotomicInt::from_integer(4, int(-1))
    );
    assert_eq!(
        eta2.value(ConjClass::XY),
        &CyclotomicInt::from_integer(4, int(-1))
    );
    assert_eq!(decompose(&chi).unwrap(), RepElement::basis(g, Irrep::D(1)));
}

#[test]
fn adams_polynomials() {
    assert_eq!(psi_series(1).unwrap(), PhiPoly::phi());
    assert_eq!(psi_series(2).unwrap(), PhiPoly::from_phi_coeffs(&[4, 1]));
    assert_eq!(psi_series(3).unwrap(), PhiPoly::from_phi_coeffs(&[9, 6, 1]));
    assert_eq!(
        psi_oracle(4).unwrap(),
        PhiPoly::from_phi_coeffs(&[16, 20, 8, 1])
    );
    assert_eq!(g_poly(2).unwrap(), PhiPoly::from_phi_coeffs(&[8, 6, 1]));
    assert_eq!(
        g_poly(4).unwrap(),
        PhiPoly::from_phi_coeffs(&[16, 44, 34, 10, 1])
    );
    assert_eq!(
        psi_series(5).unwrap().to_string(),
        "φ^5 + 10φ^4 + 35φ^3 + 50φ^2 + 25φ"
    );
    assert!(psi_series(0).is_err());
}

#[test]
fn q8_presentation() {
    let set = relations_for(p(3)).unwrap();
    let rhs = |id| set.rule(id).unwrap().rhs.to_string();
    assert_eq!(rhs(RelationId::R1), "-2v1");
    assert_eq!(rhs(RelationId::R5), "-2v2");
    assert_eq!(rhs(RelationId::R6), "φ^2 + 4φ - 2v1 - 2v2");
    assert_eq!(rhs(RelationId::R3), "-6φ^2 - 8φ");
    assert!(set
        .reduce(&KPoly::from_phi_poly(&g_poly(2).unwrap()))
        .is_zero());
}

#[test]
fn redundancy_certificates() {
    for n in 3..=5 {
        let r = relation3_redundancy(p(n)).unwrap();
        assert!(r.holds(), "n = {n}: {}", r.reduced);
        assert!(r.sign.is_some());
    }
}

#[test]
fn truncated_orders() {
    let phi = RepElement::phi(p(3));
    let q1 = TruncatedQuotient::by_phi_power(p(3), 1);
    let q2 = TruncatedQuotient::by_phi_power(p(3), 2);
    assert_eq!(order_of(&phi, &q1), ElementOrder::Finite(int(1)));
    assert_eq!(order_of(&phi, &q2), ElementOrder::Finite(int(8)));
    assert_eq!(torsion_order(&q1), int(4));
    assert_eq!(torsion_order(&q2), int(128));
    assert_eq!(
        torsion_order(&TruncatedQuotient::by_phi_power(p(4), 2)),
        int(256)
    );
    assert_eq!(
        order_of(&RepElement::integer(p(3), int(1)), &q2),
        ElementOrder::Infinite
    );
    let labels: Vec<String> = corollary2_table(4, 2)
        .iter()
        .map(|c| c.order.power_of_two_label())
        .collect();
    assert_eq!(labels, ["2^3", "2^5", "2^7", "2^4", "2^6", "2^8"]);
}

#[test]
fn smith_form_small() {
    let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
    let s = smith_normal_form(&m);
    assert_eq!(s.invariant_factors(), vec![int(2), int(4)]);
    assert_eq!(&(&s.u * &m) * &s.v, s.d);
    let singular = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
    assert_eq!(smith_normal_form(&singular).rank(), 1);
}

#[test]
fn lens_restriction() {
    let g = p(4);
    assert_eq!(restrict(&RepElement::phi(g)), LensElement::w(4));
    assert_eq!(
        restrict(&RepElement::basis(g, Irrep::Eta1)),
        LensElement::one(4)
    );
    assert_eq!(
        restrict(&RepElement::basis(g, Irrep::Eta2)),
        LensElement::eta_pow(4, 4)
    );
    let d3 = LensElement::eta_pow(4, 3)
        .try_add(&LensElement::eta_pow(4, -3))
        .unwrap();
    assert_eq!(restrict(&RepElement::basis(g, Irrep::D(3))), d3);
}

#[test]
fn cohomology_table() {
    assert_eq!(h_group(0, 2), CohGroup { factors: vec![0] });
    assert_eq!(h_group(4, 2), CohGroup { factors: vec![8] });
    assert_eq!(
        h_group(10, 2),
        CohGroup {
            factors: vec![2, 2]
        }
    );
    assert!(h_group(3, 2).is_trivial());
    assert_eq!(predicted_reduced_order(1, 4), int(256));
}
