//! Integral cohomology of `BQ_{4k}` and the order bookkeeping that compares it
//! with the truncated K-rings.
//!
//! `H^0 = Z`, `H^{4s+2} = Z_2 ⊕ Z_2`, `H^{4s} = Z_{4k}` for `s >= 1`, and odd
//! degrees vanish, so the Atiyah–Hirzebruch spectral sequence collapses and the
//! reduced K-group of the `(4N+3)`-skeleton quotient has order
//! `Π |H^{2j}|` over `2 <= 2j <= 4N+2`, i.e. `4^{N+1}·(4k)^N`.

use std::fmt;

use num_traits::One;
use serde_json::{json, Value};

use crate::arith::Integer;
use crate::rep_ring::{GroupParams, RepElement};
use crate::truncated::{
    order_of, torsion_order, truncated_quotient, ElementOrder, TruncatedQuotient,
};

/// Direct sum of cyclic groups; a factor of `0` stands for `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CohGroup {
    pub factors: Vec<u64>,
}

impl CohGroup {
    pub fn trivial() -> Self {
        CohGroup {
            factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group order, `None` when some factor is infinite.
    pub fn order(&self) -> Option<Integer> {
        self.factors
            .iter()
            .map(|&f| (f != 0).then(|| Integer::from(f)))
            .product()
    }

    pub fn to_json(&self) -> Value {
        json!(self.factors)
    }
}

impl fmt::Display for CohGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&c| {
                if c == 0 {
                    "Z".to_string()
                } else {
                    format!("Z_{c}")
                }
            })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// `H^p(BQ_{4k}; Z)`.
pub fn h_group(p: u64, k: u64) -> CohGroup {
    match p {
        0 => CohGroup { factors: vec![0] },
        p if p % 2 == 1 => CohGroup::trivial(),
        p if p % 4 == 2 => CohGroup {
            factors: vec![2, 2],
        },
        _ => CohGroup {
            factors: vec![4 * k],
        },
    }
}

/// Symbolic form of `H^p`, with `k` left as a letter.
pub fn h_group_symbolic(p: u64) -> &'static str {
    match p {
        0 => "Z",
        p if p % 2 == 1 => "0",
        p if p % 4 == 2 => "Z_2 ⊕ Z_2",
        _ => "Z_{4k}",
    }
}

/// `Π |H^{2j}|` for `2 <= 2j <= 4N + 2`, which equals `4^{N+1}·(4k)^N`.
pub fn predicted_reduced_order(big_n: u64, k: u64) -> Integer {
    (1..=2 * big_n + 1)
        .map(|j| {
            h_group(2 * j, k)
                .order()
                .expect("finite in positive degree")
        })
        .product()
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub n: u32,
    pub big_n: usize,
    /// Torsion of `R/φ^{N+1}R`, the truncation matched by the cohomology count.
    pub torsion_computed: Integer,
    pub torsion_predicted: Integer,
    /// Order of `φ` in `R/φ^{N+2}R`.
    pub phi_order: ElementOrder,
    pub phi_order_expected: Integer,
    /// Order of `φ` at `N + 1` divided by the order at `N`.
    pub phi_growth: Option<Integer>,
}

impl ConsistencyReport {
    pub fn torsion_matches(&self) -> bool {
        self.torsion_computed == self.torsion_predicted
    }

    pub fn phi_matches(&self) -> bool {
        self.phi_order.finite() == Some(&self.phi_order_expected)
    }

    pub fn growth_is_four(&self) -> bool {
        self.phi_growth == Some(Integer::from(4))
    }

    pub fn all_match(&self) -> bool {
        self.torsion_matches() && self.phi_matches() && self.growth_is_four()
    }

    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("n = {}, N = {}", self.n, self.big_n),
            format!(
                "torsion of R/φ^{}R: computed {}, cohomology predicts 4^{}·(4k)^{} = {}, match {}",
                self.big_n + 1,
                self.torsion_computed,
                self.big_n + 1,
                self.big_n,
                self.torsion_predicted,
                self.torsion_matches()
            ),
            format!(
                "order of φ in R/φ^{}R: computed {}, expected 2^(n+2N) = {}, match {}",
                self.big_n + 2,
                self.phi_order,
                self.phi_order_expected,
                self.phi_matches()
            ),
            format!(
                "order growth N -> N+1: {}, expected 4, match {}",
                self.phi_growth
                    .as_ref()
                    .map_or("n/a".to_string(), ToString::to_string),
                self.growth_is_four()
            ),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "N": self.big_n,
            "torsion": {
                "phi_power": self.big_n + 1,
                "computed": self.torsion_computed.to_string(),
                "predicted": self.torsion_predicted.to_string(),
                "match": self.torsion_matches(),
            },
            "phi_order": {
                "phi_power": self.big_n + 2,
                "computed": self.phi_order.to_string(),
                "expected": self.phi_order_expected.to_string(),
                "match": self.phi_matches(),
            },
            "growth": {
                "computed": self.phi_growth.as_ref().map(ToString::to_string),
                "expected": "4",
                "match": self.growth_is_four(),
            },
        })
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

pub fn consistency_report(params: GroupParams, big_n: usize) -> ConsistencyReport {
    let k = params.k() as u64;
    let phi = RepElement::phi(params);
    let torsion_computed = torsion_order(&TruncatedQuotient::by_phi_power(params, big_n + 1));
    let phi_order = order_of(&phi, &truncated_quotient(params, big_n));
    let next = order_of(&phi, &truncated_quotient(params, big_n + 1));
    let phi_growth = match (phi_order.finite(), next.finite()) {
        (Some(a), Some(b)) if (b % a) == Integer::from(0) => Some(b / a),
        _ => None,
    };
    ConsistencyReport {
        n: params.n(),
        big_n,
        torsion_computed,
        torsion_predicted: predicted_reduced_order(big_n as u64, k),
        phi_order,
        phi_order_expected: Integer::one() << (params.n() as usize + 2 * big_n),
        phi_growth,
    }
}
