//! Orders of elements in the truncated rings `R(Q_{4k}) / φ^e R(Q_{4k})`.
//!
//! The quotient is the abelian group `Z^{k+3} / L` where `L` is spanned by
//! `φ^e · b` for every irreducible `b`. Orders come from the Smith form of the
//! generator matrix of `L`.
//!
//! The sphere-quotient index `N` used by [`truncated_quotient`],
//! [`corollary2_table`] and the CLI corresponds to the ideal exponent
//! `e = N + 2`: that is the truncation in which `φ` has order `2^{n+2N}`, and in
//! particular order `4k` in `R/φ²R`. [`TruncatedQuotient::by_phi_power`] takes
//! the raw exponent.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{two_adic_valuation, Integer};
use crate::linalg::{smith_normal_form, IntMatrix, SmithForm};
use crate::rep_ring::{multiply, phi_powers, GroupParams, Irrep, RepElement};

/// Offset between the sphere-quotient index `N` and the ideal exponent.
pub const SPHERE_INDEX_OFFSET: usize = 2;

#[derive(Debug, Clone)]
pub struct TruncatedQuotient {
    params: GroupParams,
    phi_power: usize,
    lattice: IntMatrix,
    smith: SmithForm,
}

impl TruncatedQuotient {
    /// `R(Q_{4k}) / φ^e R(Q_{4k})`.
    pub fn by_phi_power(params: GroupParams, phi_power: usize) -> Self {
        let generator = phi_powers(params, phi_power).pop().expect("nonempty");
        let rows = Irrep::all(params)
            .map(|b| {
                multiply(&generator, &RepElement::basis(params, b))
                    .coeffs()
                    .to_vec()
            })
            .collect();
        let lattice = IntMatrix::from_rows(rows);
        let smith = smith_normal_form(&lattice);
        TruncatedQuotient {
            params,
            phi_power,
            lattice,
            smith,
        }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn phi_power(&self) -> usize {
        self.phi_power
    }

    /// Rows are `φ^e·b` in the irreducible basis, one per irreducible `b`.
    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn rank(&self) -> usize {
        self.smith.rank()
    }
}

/// `R(Q_{4k}) / φ^{N+2} R(Q_{4k})`, indexed like the sphere quotients `S^{4N+3}/Q_{4k}`.
pub fn truncated_quotient(params: GroupParams, big_n: usize) -> TruncatedQuotient {
    TruncatedQuotient::by_phi_power(params, big_n + SPHERE_INDEX_OFFSET)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementOrder {
    Finite(Integer),
    Infinite,
}

impl ElementOrder {
    pub fn finite(&self) -> Option<&Integer> {
        match self {
            ElementOrder::Finite(t) => Some(t),
            ElementOrder::Infinite => None,
        }
    }

    /// `"2^e"` when the order is a power of two, else the decimal value.
    pub fn power_of_two_label(&self) -> String {
        match self {
            ElementOrder::Infinite => "infinite".to_string(),
            ElementOrder::Finite(t) => match power_of_two_exponent(t) {
                Some(e) => format!("2^{e}"),
                None => t.to_string(),
            },
        }
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(t) => write!(f, "{t}"),
            ElementOrder::Infinite => f.write_str("infinite"),
        }
    }
}

fn power_of_two_exponent(t: &Integer) -> Option<u64> {
    let e = two_adic_valuation(t).ok()?;
    (*t == Integer::one() << e).then_some(e)
}

/// Least `t >= 1` with `t·x` in the lattice.
///
/// With `U·M·V = D`, `x` lies in the row space of `M` iff `y = x·V` lies in the
/// row space of `D`, so the order is `lcm_j d_j / gcd(d_j, y_j)` over the nonzero
/// diagonal, or infinite if `y` has support past the rank.
pub fn order_of(element: &RepElement, q: &TruncatedQuotient) -> ElementOrder {
    assert_eq!(element.params(), q.params, "element from a different group");
    let y = q.smith.v.vec_mul(element.coeffs());
    let diag = q.smith.diagonal();
    let mut order = Integer::one();
    for (j, yj) in y.iter().enumerate() {
        let dj = diag.get(j).cloned().unwrap_or_default();
        if dj.is_zero() {
            if !yj.is_zero() {
                return ElementOrder::Infinite;
            }
            continue;
        }
        let need = &dj / dj.gcd(yj);
        order = order.lcm(&need);
    }
    ElementOrder::Finite(order)
}

/// Product of the nonzero elementary divisors, the size of the torsion subgroup.
pub fn torsion_order(q: &TruncatedQuotient) -> Integer {
    q.smith.invariant_factors().iter().product()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCell {
    pub n: u32,
    pub big_n: usize,
    pub order: ElementOrder,
    pub expected: Integer,
}

impl OrderCell {
    pub fn matches(&self) -> bool {
        self.order.finite() == Some(&self.expected)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "N": self.big_n,
            "order": self.order.power_of_two_label(),
            "expected": format!("2^{}", self.n as usize + 2 * self.big_n),
            "match": self.matches(),
        })
    }
}

impl fmt::Display for OrderCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} N={} order={} ({}) expected=2^{} match={}",
            self.n,
            self.big_n,
            self.order,
            self.order.power_of_two_label(),
            self.n as usize + 2 * self.big_n,
            self.matches()
        )
    }
}

pub fn phi_order_cell(params: GroupParams, big_n: usize) -> OrderCell {
    let q = truncated_quotient(params, big_n);
    let order = order_of(&RepElement::phi(params), &q);
    OrderCell {
        n: params.n(),
        big_n,
        order,
        expected: Integer::one() << (params.n() as usize + 2 * big_n),
    }
}

/// Order of `φ` for every `3 <= n <= n_max`, `0 <= N <= big_n_max`, computed in
/// parallel and returned in row-major `(n, N)` order.
pub fn corollary2_table(n_max: u32, big_n_max: usize) -> Vec<OrderCell> {
    let cells: Vec<(u32, usize)> = (3..=n_max)
        .flat_map(|n| (0..=big_n_max).map(move |big_n| (n, big_n)))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, big_n)| {
            let params = GroupParams::new(n).expect("n >= 3");
            phi_order_cell(params, big_n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> GroupParams {
        GroupParams::new(n).unwrap()
    }

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn lattice_shapes() {
        let q = truncated_quotient(p(3), 0);
        assert_eq!((q.lattice().rows(), q.lattice().cols()), (5, 5));
        assert_eq!(q.rank(), 4);
        let q = truncated_quotient(p(4), 1);
        assert_eq!((q.lattice().rows(), q.lattice().cols()), (7, 7));
        assert_eq!(q.rank(), 6);
        // raw exponent 1: the row for b = 1 is φ itself
        let q = TruncatedQuotient::by_phi_power(p(3), 1);
        assert_eq!(q.lattice().row(0), RepElement::phi(p(3)).coeffs());
        let q = truncated_quotient(p(3), 0);
        let phi2 = phi_powers(p(3), 2).pop().unwrap();
        assert_eq!(q.lattice().row(0), phi2.coeffs());
    }

    #[test]
    fn lattice_rows_are_products() {
        let g = p(4);
        let q = TruncatedQuotient::by_phi_power(g, 3);
        let phi3 = phi_powers(g, 3).pop().unwrap();
        for b in Irrep::all(g) {
            let row = &phi3 * &RepElement::basis(g, b);
            assert_eq!(q.lattice().row(b.index()), row.coeffs());
        }
    }

    #[test]
    fn phi_order_examples() {
        let cases = [(4, 0, 16), (3, 0, 8), (3, 1, 32), (5, 0, 32), (4, 2, 256)];
        for (n, big_n, expected) in cases {
            let q = truncated_quotient(p(n), big_n);
            assert_eq!(
                order_of(&RepElement::phi(p(n)), &q),
                ElementOrder::Finite(int(expected))
            );
        }
    }

    #[test]
    fn unit_has_infinite_order() {
        let q = truncated_quotient(p(3), 0);
        assert_eq!(order_of(&RepElement::one(p(3)), &q), ElementOrder::Infinite);
        assert_eq!(
            order_of(&RepElement::zero(p(3)), &q),
            ElementOrder::Finite(int(1))
        );
    }

    #[test]
    fn order_agrees_with_brute_force_membership() {
        // t·φ in L iff the rational solution of c·M = t·φ is integral; check
        // divisibility of the reported order against direct multiples.
        let g = p(3);
        let q = TruncatedQuotient::by_phi_power(g, 2);
        let phi = RepElement::phi(g);
        let ElementOrder::Finite(t) = order_of(&phi, &q) else {
            panic!()
        };
        assert_eq!(t, int(8));
        for s in 1..8 {
            let y = q.smith().v.vec_mul(phi.scale(&int(s)).coeffs());
            let in_lattice = y.iter().zip(q.smith().diagonal()).all(|(yj, dj)| {
                if dj.is_zero() {
                    yj.is_zero()
                } else {
                    yj.is_multiple_of(&dj)
                }
            });
            assert!(!in_lattice, "{s}·φ unexpectedly in lattice");
        }
    }

    #[test]
    fn torsion_values() {
        // computed exploratory values, cross-checked independently
        assert_eq!(
            torsion_order(&TruncatedQuotient::by_phi_power(p(3), 1)),
            int(4)
        );
        assert_eq!(
            torsion_order(&TruncatedQuotient::by_phi_power(p(3), 2)),
            int(128)
        );
        assert_eq!(
            torsion_order(&TruncatedQuotient::by_phi_power(p(4), 2)),
            int(256)
        );
        let ident = TruncatedQuotient {
            params: p(3),
            phi_power: 0,
            lattice: IntMatrix::identity(5),
            smith: smith_normal_form(&IntMatrix::identity(5)),
        };
        assert_eq!(torsion_order(&ident), int(1));
        assert_eq!(
            torsion_order(&TruncatedQuotient::by_phi_power(p(3), 0)),
            int(1)
        );
    }

    #[test]
    fn jump_is_four() {
        for n in 3..=5 {
            let orders: Vec<Integer> = (0..4)
                .map(|big_n| phi_order_cell(p(n), big_n).order.finite().unwrap().clone())
                .collect();
            for w in orders.windows(2) {
                assert_eq!(&w[1], &(&w[0] * 4));
            }
        }
    }

    #[test]
    fn table_json() {
        let table = corollary2_table(3, 1);
        assert_eq!(table.len(), 2);
        assert_eq!(
            table[1].to_json(),
            json!({"n": 3, "N": 1, "order": "2^5", "expected": "2^5", "match": true})
        );
    }
}
