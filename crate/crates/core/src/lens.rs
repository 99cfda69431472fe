//! The cyclic target `Z[η]/(η^{2k} − 1)` and the restriction along `Z_{2k} = <x> ⊂ Q_{4k}`.
//!
//! Restriction sends `1, η1 ↦ 1`, `η2, η3 ↦ η^k` and `d_i ↦ η^i + η^{-i}`; in
//! particular `φ = d_1 − 2 ↦ w = η + η^{-1} − 2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use thiserror::Error;

use crate::adams::{g_poly, psi_series, AdamsError};
use crate::arith::{IntPoly, Integer};
use crate::kring::{relations_for, KPoly, KRingError};
use crate::rep_ring::{multiply, GroupParams, Irrep, RepElement};
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("lens elements have different k ({0} vs {1})")]
    MismatchedK(usize, usize),
    #[error("malformed lens element JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Adams(#[from] AdamsError),
    #[error(transparent)]
    KRing(#[from] KRingError),
}

/// `Σ c_e η^e` for `0 <= e < 2k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LensElement {
    k: usize,
    coeffs: Vec<Integer>,
}

impl LensElement {
    pub fn zero(k: usize) -> Self {
        assert!(k >= 1);
        LensElement {
            k,
            coeffs: vec![Integer::zero(); 2 * k],
        }
    }

    pub fn one(k: usize) -> Self {
        Self::eta_pow(k, 0)
    }

    pub fn integer(k: usize, c: Integer) -> Self {
        let mut z = Self::zero(k);
        z.coeffs[0] = c;
        z
    }

    pub fn eta_pow(k: usize, e: i64) -> Self {
        let mut z = Self::zero(k);
        z.add_eta_pow(e, &Integer::one());
        z
    }

    /// `w = η + η^{-1} − 2`.
    pub fn w(k: usize) -> Self {
        let mut z = Self::integer(k, Integer::from(-2));
        z.add_eta_pow(1, &Integer::one());
        z.add_eta_pow(-1, &Integer::one());
        z
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add_eta_pow(&mut self, e: i64, c: &Integer) {
        let idx = e.rem_euclid(2 * self.k as i64) as usize;
        self.coeffs[idx] += c;
    }

    fn check(&self, other: &Self) -> Result<(), LensError> {
        if self.k == other.k {
            Ok(())
        } else {
            Err(LensError::MismatchedK(self.k, other.k))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LensError> {
        self.check(other)?;
        Ok(LensElement {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LensError> {
        self.check(other)?;
        Ok(LensElement {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Integer) -> Self {
        LensElement {
            k: self.k,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cyclic convolution modulo `η^{2k} = 1`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, LensError> {
        self.check(other)?;
        let len = 2 * self.k;
        let mut out = Self::zero(self.k);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[(i + j) % len] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `P(self)` by Horner's scheme.
    pub fn eval_poly(&self, p: &IntPoly) -> Self {
        p.coeffs().iter().rev().fold(Self::zero(self.k), |acc, c| {
            let prod = acc.try_mul(self).expect("same k");
            prod.try_add(&Self::integer(self.k, c.clone()))
                .expect("same k")
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "coeffs": self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, LensError> {
        let k = v
            .get("k")
            .and_then(Value::as_u64)
            .filter(|&k| k >= 1)
            .ok_or_else(|| LensError::Json("missing or invalid k".into()))?
            as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2 * k)
            .ok_or_else(|| LensError::Json(format!("coeffs must have {} entries", 2 * k)))?
            .iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| s.parse::<BigInt>().ok())
                    .ok_or_else(|| LensError::Json(format!("expected decimal string, got {c}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(LensElement { k, coeffs })
    }
}

impl fmt::Display for LensElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&IntPoly::new(self.coeffs.clone()).display_in("η"))
    }
}

pub fn lens_multiply(a: &LensElement, b: &LensElement) -> Result<LensElement, LensError> {
    a.try_mul(b)
}

pub fn restrict(r: &RepElement) -> LensElement {
    let k = r.params().k();
    let mut out = LensElement::zero(k);
    for (label, c) in r.terms() {
        match label {
            Irrep::One | Irrep::Eta1 => out.add_eta_pow(0, c),
            Irrep::Eta2 | Irrep::Eta3 => out.add_eta_pow(k as i64, c),
            Irrep::D(i) => {
                out.add_eta_pow(i as i64, c);
                out.add_eta_pow(-(i as i64), c);
            }
        }
    }
    out
}

/// Images of the K-ring generators, computed directly in the lens ring:
/// `v1 ↦ 0`, `v2 ↦ η^k − 1`, `φ ↦ w`.
pub fn restrict_kpoly(params: GroupParams, p: &KPoly) -> LensElement {
    let k = params.k();
    let v1 = LensElement::zero(k);
    let v2 = LensElement::eta_pow(k, k as i64)
        .try_sub(&LensElement::one(k))
        .expect("same k");
    let w = LensElement::w(k);
    let pow = |base: &LensElement, e: u32| {
        (0..e).fold(LensElement::one(k), |acc, _| {
            acc.try_mul(base).expect("same k")
        })
    };
    let mut out = LensElement::zero(k);
    for (m, c) in p.terms() {
        let term = pow(&v1, m.v1)
            .try_mul(&pow(&v2, m.v2))
            .and_then(|t| t.try_mul(&pow(&w, m.phi)))
            .expect("same k");
        out = out.try_add(&term.scale(c)).expect("same k");
    }
    out
}

fn random_element(params: GroupParams, rng: &mut StdRng) -> RepElement {
    let coeffs = (0..params.rank())
        .map(|_| Integer::from(rng.gen_range(-7i64..=7)))
        .collect();
    RepElement::from_coeffs(params, coeffs)
}

/// `restrict` is a unital ring homomorphism: checked on every basis pair and on
/// `trials` seeded random virtual elements.
pub fn verify_restriction_hom(params: GroupParams, trials: usize, seed: u64) -> Report {
    let k = params.k();
    let mut report = Report::new(format!("restriction to Z_{} (n = {})", 2 * k, params.n()));
    report.push(Check::new(
        "restrict(1) = 1",
        restrict(&RepElement::one(params)) == LensElement::one(k),
        "",
    ));
    report.push(Check::new(
        "restrict(0·0) = 0",
        restrict(&multiply(
            &RepElement::zero(params),
            &RepElement::zero(params),
        ))
        .is_zero(),
        "",
    ));
    let mut bad = Vec::new();
    for a in Irrep::all(params) {
        for b in Irrep::all(params) {
            let ea = RepElement::basis(params, a);
            let eb = RepElement::basis(params, b);
            let lhs = restrict(&multiply(&ea, &eb));
            let rhs = restrict(&ea).try_mul(&restrict(&eb)).expect("same k");
            if lhs != rhs {
                bad.push(format!("{a}·{b}"));
            }
        }
    }
    report.push(Check::new(
        "multiplicative on basis pairs",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} pairs", params.rank() * params.rank())
        } else {
            bad.join(", ")
        },
    ));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut random_ok = 0;
    for _ in 0..trials {
        let a = random_element(params, &mut rng);
        let b = random_element(params, &mut rng);
        let sum_ok = restrict(&(&a + &b)) == restrict(&a).try_add(&restrict(&b)).expect("same k");
        let mul_ok =
            restrict(&multiply(&a, &b)) == restrict(&a).try_mul(&restrict(&b)).expect("same k");
        random_ok += usize::from(sum_ok && mul_ok);
    }
    report.push(Check::new(
        "additive and multiplicative on random elements",
        random_ok == trials,
        format!("{random_ok}/{trials}"),
    ));
    let phi_ok = restrict(&RepElement::phi(params)) == LensElement::w(k);
    report.push(Check::new("φ ↦ w", phi_ok, ""));
    report
}

/// Relations 1–6 and `g_{2k}(w)` vanish in the lens ring, and
/// `ψ^i(w) = η^i + η^{-i} − 2` for `1 <= i <= 2k`.
pub fn verify_relations_vanish(params: GroupParams) -> Result<Report, LensError> {
    let k = params.k();
    let rels = relations_for(params)?;
    let mut report = Report::new(format!(
        "relations vanish in Z[η]/(η^{} − 1) (n = {})",
        2 * k,
        params.n()
    ));
    for rule in rels.rules() {
        let image = restrict_kpoly(params, &rule.difference());
        report.push(Check::new(
            rule.id.to_string(),
            image.is_zero(),
            nonzero(&image),
        ));
    }
    let w = LensElement::w(k);
    let g = w.eval_poly(g_poly(k)?.as_poly());
    report.push(Check::new(
        format!("g_{}(w) = 0", 2 * k),
        g.is_zero(),
        nonzero(&g),
    ));

    let mut bad = Vec::new();
    for i in 1..=2 * k {
        let lhs = w.eval_poly(psi_series(i)?.as_poly());
        let mut rhs = LensElement::integer(k, Integer::from(-2));
        rhs.add_eta_pow(i as i64, &Integer::one());
        rhs.add_eta_pow(-(i as i64), &Integer::one());
        if lhs != rhs {
            bad.push(i.to_string());
        }
    }
    report.push(Check::new(
        format!("ψ^i(w) = η^i + η^-i − 2 for 1 <= i <= {}", 2 * k),
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("failing i: {}", bad.join(", "))
        },
    ));
    Ok(report)
}

fn nonzero(e: &LensElement) -> String {
    if e.is_zero() {
        String::new()
    } else {
        format!("image {e}")
    }
}
