//! The presented ring `Z[v1, v2, φ]` modulo the minimal relations
//!
//! ```text
//! (1) v1² = −2v1          (2) v2² = −2v2
//! (4) v1φ = −2v1          (5) v2φ = ψ^{k−1}(φ) − φ − 2v2
//! (6) v1v2 = φ² + 4φ − 2v1 − 2v2        (n = 3)
//!     v1v2 = ψ^k(φ) − 2v2               (n ≥ 4)
//! ```
//!
//! together with the derived rule `φ^{k+1} = φ^{k+1} − g_{2k}(φ)` (relation 3),
//! which is needed to close the normal form but is not part of the presentation.
//!
//! Normal forms live on the basis `{1, v1, v2, φ, ..., φ^k}`. Rewriting always
//! replaces the largest monomial under the key (v-count, total degree, v1, v2, φ),
//! and every rule's right side is strictly smaller than its left side, so
//! reduction terminates.
//!
//! Correctness is certified through [`embed_to_r`], which substitutes
//! `v1 = η1 − 1`, `v2 = η2 − 1`, `φ = d_1 − 2` into `R(Q_{4k})`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::adams::{four_k_cofactor, g_poly, psi_series, AdamsError, PhiPoly};
use crate::arith::{IntPoly, Integer};
use crate::linalg::IntMatrix;
use crate::rep_ring::{canonical_d, multiply, phi_powers, GroupParams, Irrep, RepElement};
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KRingError {
    #[error("expression does not reduce into the normal-form basis: {0}")]
    NotClosed(String),
    #[error("elements belong to different groups (n = {0} vs n = {1})")]
    MismatchedGroup(u32, u32),
    #[error("malformed element JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Adams(#[from] AdamsError),
}

/// `v1^a · v2^b · φ^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub v1: u32,
    pub v2: u32,
    pub phi: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        v1: 0,
        v2: 0,
        phi: 0,
    };
    pub const V1: Monomial = Monomial {
        v1: 1,
        v2: 0,
        phi: 0,
    };
    pub const V2: Monomial = Monomial {
        v1: 0,
        v2: 1,
        phi: 0,
    };

    pub fn new(v1: u32, v2: u32, phi: u32) -> Self {
        Monomial { v1, v2, phi }
    }

    pub fn phi_pow(j: u32) -> Self {
        Monomial {
            v1: 0,
            v2: 0,
            phi: j,
        }
    }

    pub fn v_count(&self) -> u32 {
        self.v1 + self.v2
    }

    pub fn degree(&self) -> u32 {
        self.v1 + self.v2 + self.phi
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.v1 <= other.v1 && self.v2 <= other.v2 && self.phi <= other.phi
    }

    /// `self / other`, assuming `other` divides `self`.
    fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial {
            v1: self.v1 - other.v1,
            v2: self.v2 - other.v2,
            phi: self.phi - other.phi,
        }
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            v1: self.v1 + other.v1,
            v2: self.v2 + other.v2,
            phi: self.phi + other.phi,
        }
    }

    fn key(&self) -> (u32, u32, u32, u32, u32) {
        (self.v_count(), self.degree(), self.v1, self.v2, self.phi)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Monomial::ONE {
            return f.write_str("1");
        }
        for (name, e) in [("v1", self.v1), ("v2", self.v2), ("φ", self.phi)] {
            match e {
                0 => {}
                1 => f.write_str(name)?,
                e => write!(f, "{name}^{e}")?,
            }
        }
        Ok(())
    }
}

/// A formal integer polynomial in `v1, v2, φ`, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct KPoly {
    terms: BTreeMap<Monomial, Integer>,
}

impl KPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(m: Monomial, c: impl Into<Integer>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, 1)
    }

    pub fn v1() -> Self {
        Self::monomial(Monomial::V1)
    }

    pub fn v2() -> Self {
        Self::monomial(Monomial::V2)
    }

    pub fn phi() -> Self {
        Self::monomial(Monomial::phi_pow(1))
    }

    pub fn from_int_poly(p: &IntPoly) -> Self {
        let mut out = Self::zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            out.add_term(Monomial::phi_pow(j as u32), c.clone());
        }
        out
    }

    pub fn from_phi_poly(p: &PhiPoly) -> Self {
        Self::from_int_poly(p.as_poly())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Integer)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Integer {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Integer) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Integer) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    /// The pure-`φ` part, if no monomial involves `v1` or `v2`.
    pub fn as_phi_poly(&self) -> Option<IntPoly> {
        if self.terms.keys().any(|m| m.v_count() > 0) {
            return None;
        }
        let len = self
            .terms
            .keys()
            .map(|m| m.phi as usize + 1)
            .max()
            .unwrap_or(0);
        let mut v = vec![Integer::zero(); len];
        for (m, c) in &self.terms {
            v[m.phi as usize] = c.clone();
        }
        Some(IntPoly::new(v))
    }
}

impl Add for &KPoly {
    type Output = KPoly;
    fn add(self, rhs: &KPoly) -> KPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &KPoly {
    type Output = KPoly;
    fn sub(self, rhs: &KPoly) -> KPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &KPoly {
    type Output = KPoly;
    fn neg(self) -> KPoly {
        self.scale(&-Integer::one())
    }
}

impl Mul for &KPoly {
    type Output = KPoly;
    fn mul(self, rhs: &KPoly) -> KPoly {
        let mut out = KPoly::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.times(mb), a * b);
            }
        }
        out
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // φ-polynomial part first, highest degree leading, then v-terms
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.v_count(), std::cmp::Reverse((m.degree(), m.v1, m.phi))));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            match (idx == 0, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    R1,
    R2,
    /// `g_{2k}(φ) = 0`, derived; only used to reduce `φ^{k+1}`.
    R3,
    R4,
    R5,
    R6,
}

impl RelationId {
    /// The five relations of the minimal presentation.
    pub const PRESENTATION: [RelationId; 5] = [
        RelationId::R1,
        RelationId::R2,
        RelationId::R4,
        RelationId::R5,
        RelationId::R6,
    ];

    pub fn number(self) -> u8 {
        match self {
            RelationId::R1 => 1,
            RelationId::R2 => 2,
            RelationId::R3 => 3,
            RelationId::R4 => 4,
            RelationId::R5 => 5,
            RelationId::R6 => 6,
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation {}", self.number())
    }
}

/// Oriented relation `lhs → rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RelationId,
    pub lhs: Monomial,
    pub rhs: KPoly,
}

impl Rule {
    fn new(id: RelationId, lhs: Monomial, rhs: KPoly) -> Self {
        debug_assert!(rhs.terms().all(|(m, _)| m < &lhs), "{id} does not decrease");
        Rule { id, lhs, rhs }
    }

    /// `lhs − rhs`, which must vanish in the ring.
    pub fn difference(&self) -> KPoly {
        &KPoly::monomial(self.lhs) - &self.rhs
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    params: GroupParams,
    rules: Vec<Rule>,
}

/// Rules of the presentation plus the derived `φ^{k+1}` rule.
pub fn relations_for(params: GroupParams) -> Result<RelationSet, KRingError> {
    let k = params.k();
    let two = Integer::from(2);
    let m2 = |p: KPoly| p.scale(&-two.clone());
    let psi = |i: usize| psi_series(i).map(|p| KPoly::from_phi_poly(&p));

    let r5 = &(&psi(k - 1)? - &KPoly::phi()) + &m2(KPoly::v2());
    let r6 = if params.n() == 3 {
        let quad = &KPoly::term(Monomial::phi_pow(2), 1) + &KPoly::term(Monomial::phi_pow(1), 4);
        &(&quad + &m2(KPoly::v1())) + &m2(KPoly::v2())
    } else {
        &psi(k)? + &m2(KPoly::v2())
    };
    let top = Monomial::phi_pow(k as u32 + 1);
    let r3 = &KPoly::monomial(top) - &KPoly::from_phi_poly(&g_poly(k)?);

    let rules = vec![
        Rule::new(RelationId::R1, Monomial::new(2, 0, 0), m2(KPoly::v1())),
        Rule::new(RelationId::R2, Monomial::new(0, 2, 0), m2(KPoly::v2())),
        Rule::new(RelationId::R4, Monomial::new(1, 0, 1), m2(KPoly::v1())),
        Rule::new(RelationId::R5, Monomial::new(0, 1, 1), r5),
        Rule::new(RelationId::R6, Monomial::new(1, 1, 0), r6),
        Rule::new(RelationId::R3, top, r3),
    ];
    Ok(RelationSet { params, rules })
}

impl RelationSet {
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RelationId) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn contains(&self, id: RelationId) -> bool {
        self.rule(id).is_some()
    }

    /// Copy keeping only the listed relations.
    pub fn restricted(&self, keep: &[RelationId]) -> RelationSet {
        RelationSet {
            params: self.params,
            rules: self
                .rules
                .iter()
                .filter(|r| keep.contains(&r.id))
                .cloned()
                .collect(),
        }
    }

    pub fn without(&self, id: RelationId) -> RelationSet {
        RelationSet {
            params: self.params,
            rules: self.rules.iter().filter(|r| r.id != id).cloned().collect(),
        }
    }

    fn find_rule(&self, m: &Monomial) -> Option<&Rule> {
        self.rules.iter().find(|r| r.lhs.divides(m))
    }

    /// Rewrites until no rule applies.
    pub fn reduce(&self, expr: &KPoly) -> KPoly {
        let mut work = expr.terms.clone();
        let mut out = KPoly::zero();
        while let Some((m, c)) = work.pop_last() {
            match self.find_rule(&m) {
                None => {
                    out.terms.insert(m, c);
                }
                Some(rule) => {
                    let q = m.quotient(&rule.lhs);
                    for (rm, rc) in rule.rhs.terms() {
                        let target = q.times(rm);
                        let entry = work.entry(target).or_default();
                        *entry += &c * rc;
                        if entry.is_zero() {
                            work.remove(&target);
                        }
                    }
                }
            }
        }
        out
    }

    /// Applies `rule` once at monomial `m` (which it must divide), then reduces fully.
    pub fn reduce_via(&self, m: Monomial, rule: &Rule) -> KPoly {
        assert!(rule.lhs.divides(&m));
        let q = KPoly::monomial(m.quotient(&rule.lhs));
        self.reduce(&(&q * &rule.rhs))
    }

    pub fn normal_form(&self, expr: &KPoly) -> Result<KElement, KRingError> {
        KElement::from_reduced(self.params, &self.reduce(expr))
    }

    pub fn multiply_nf(&self, a: &KElement, b: &KElement) -> Result<KElement, KRingError> {
        if a.params != b.params || a.params != self.params {
            return Err(KRingError::MismatchedGroup(a.params.n(), b.params.n()));
        }
        self.normal_form(&(&a.to_kpoly() * &b.to_kpoly()))
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params;
        writeln!(
            f,
            "K-ring of BQ_{} (n = {}, k = {}): generators v1 = η1 − 1, v2 = η2 − 1, φ = d_1 − 2",
            p.order(),
            p.n(),
            p.k()
        )?;
        for id in RelationId::PRESENTATION {
            if let Some(rule) = self.rule(id) {
                writeln!(f, "({}) {rule}", id.number())?;
            }
        }
        if let Some(rule) = self.rule(RelationId::R3) {
            writeln!(f, "derived (3): {rule}")?;
        }
        Ok(())
    }
}

/// Normal-form basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KBasis {
    One,
    V1,
    V2,
    /// `φ^j`, `1 <= j <= k`.
    Phi(usize),
}

impl KBasis {
    pub fn all(params: GroupParams) -> Vec<KBasis> {
        let mut v = vec![KBasis::One, KBasis::V1, KBasis::V2];
        v.extend((1..=params.k()).map(KBasis::Phi));
        v
    }

    pub fn monomial(self) -> Monomial {
        match self {
            KBasis::One => Monomial::ONE,
            KBasis::V1 => Monomial::V1,
            KBasis::V2 => Monomial::V2,
            KBasis::Phi(j) => Monomial::phi_pow(j as u32),
        }
    }
}

impl fmt::Display for KBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.monomial().fmt(f)
    }
}

/// Normal-form element on `{1, v1, v2, φ, ..., φ^k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KElement {
    params: GroupParams,
    pub c0: Integer,
    pub a1: Integer,
    pub a2: Integer,
    /// Coefficients of `φ^1..φ^k`.
    pub phi: Vec<Integer>,
}

impl KElement {
    pub fn zero(params: GroupParams) -> Self {
        KElement {
            params,
            c0: Integer::zero(),
            a1: Integer::zero(),
            a2: Integer::zero(),
            phi: vec![Integer::zero(); params.k()],
        }
    }

    pub fn basis(params: GroupParams, b: KBasis) -> Self {
        let mut e = Self::zero(params);
        match b {
            KBasis::One => e.c0 = Integer::one(),
            KBasis::V1 => e.a1 = Integer::one(),
            KBasis::V2 => e.a2 = Integer::one(),
            KBasis::Phi(j) => e.phi[j - 1] = Integer::one(),
        }
        e
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero()
            && self.a1.is_zero()
            && self.a2.is_zero()
            && self.phi.iter().all(Zero::is_zero)
    }

    /// Accepts a polynomial already supported on the basis monomials.
    pub fn from_reduced(params: GroupParams, p: &KPoly) -> Result<Self, KRingError> {
        let k = params.k() as u32;
        let mut e = Self::zero(params);
        for (m, c) in p.terms() {
            match (m.v1, m.v2, m.phi) {
                (0, 0, 0) => e.c0 = c.clone(),
                (1, 0, 0) => e.a1 = c.clone(),
                (0, 1, 0) => e.a2 = c.clone(),
                (0, 0, j) if j <= k => e.phi[j as usize - 1] = c.clone(),
                _ => return Err(KRingError::NotClosed(p.to_string())),
            }
        }
        Ok(e)
    }

    pub fn to_kpoly(&self) -> KPoly {
        let mut p = KPoly::zero();
        p.add_term(Monomial::ONE, self.c0.clone());
        p.add_term(Monomial::V1, self.a1.clone());
        p.add_term(Monomial::V2, self.a2.clone());
        for (j, c) in self.phi.iter().enumerate() {
            p.add_term(Monomial::phi_pow(j as u32 + 1), c.clone());
        }
        p
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c0": self.c0.to_string(),
            "v1": self.a1.to_string(),
            "v2": self.a2.to_string(),
            "phi": self.phi.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(params: GroupParams, v: &Value) -> Result<Self, KRingError> {
        let parse = |v: &Value| -> Result<Integer, KRingError> {
            v.as_str()
                .and_then(|s| s.parse::<BigInt>().ok())
                .ok_or_else(|| KRingError::Json(format!("expected decimal string, got {v}")))
        };
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| KRingError::Json(format!("missing {name}")))
        };
        let phi = field("phi")?
            .as_array()
            .filter(|a| a.len() == params.k())
            .ok_or_else(|| KRingError::Json(format!("phi must have {} entries", params.k())))?
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KElement {
            params,
            c0: parse(field("c0")?)?,
            a1: parse(field("v1")?)?,
            a2: parse(field("v2")?)?,
            phi,
        })
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_kpoly().fmt(f)
    }
}

/// Substitutes `v1 = η1 − 1`, `v2 = η2 − 1`, `φ = d_1 − 2` into `R(Q_{4k})`.
/// Powers are computed by plain ring multiplication and cached.
pub struct Embedder {
    params: GroupParams,
    v1: Vec<RepElement>,
    v2: Vec<RepElement>,
    phi: Vec<RepElement>,
}

impl Embedder {
    pub fn new(params: GroupParams) -> Self {
        let one = RepElement::one(params);
        Embedder {
            params,
            v1: vec![one.clone()],
            v2: vec![one],
            phi: phi_powers(params, params.k() + 1),
        }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    fn grow(powers: &mut Vec<RepElement>, base: &RepElement, e: usize) {
        while powers.len() <= e {
            let next = multiply(powers.last().expect("nonempty"), base);
            powers.push(next);
        }
    }

    fn monomial(&mut self, m: &Monomial) -> RepElement {
        let p = self.params;
        let v1 = &RepElement::basis(p, Irrep::Eta1) - &RepElement::one(p);
        let v2 = &RepElement::basis(p, Irrep::Eta2) - &RepElement::one(p);
        let phi = RepElement::phi(p);
        Self::grow(&mut self.v1, &v1, m.v1 as usize);
        Self::grow(&mut self.v2, &v2, m.v2 as usize);
        Self::grow(&mut self.phi, &phi, m.phi as usize);
        let mut out = self.phi[m.phi as usize].clone();
        if m.v1 > 0 {
            out = multiply(&out, &self.v1[m.v1 as usize]);
        }
        if m.v2 > 0 {
            out = multiply(&out, &self.v2[m.v2 as usize]);
        }
        out
    }

    pub fn embed_poly(&mut self, p: &KPoly) -> RepElement {
        let mut out = RepElement::zero(self.params);
        for (m, c) in p.terms() {
            out = &out + &self.monomial(m).scale(c);
        }
        out
    }

    pub fn embed(&mut self, a: &KElement) -> RepElement {
        self.embed_poly(&a.to_kpoly())
    }

    /// `P(φ)` in `R(Q_{4k})`.
    pub fn eval_phi_poly(&mut self, p: &IntPoly) -> RepElement {
        self.embed_poly(&KPoly::from_int_poly(p))
    }
}

pub fn embed_to_r(a: &KElement) -> RepElement {
    Embedder::new(a.params).embed(a)
}

#[derive(Debug, Clone)]
pub struct BasisChange {
    /// Column `j` is the image of the `j`-th normal-form basis element,
    /// written in the irreducible basis.
    pub matrix: IntMatrix,
    pub determinant: Integer,
}

impl BasisChange {
    pub fn is_unimodular(&self) -> bool {
        self.determinant.abs().is_one()
    }
}

pub fn basis_change_matrix(params: GroupParams) -> BasisChange {
    let mut emb = Embedder::new(params);
    let basis = KBasis::all(params);
    let mut matrix = IntMatrix::zeros(params.rank(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        let image = emb.embed(&KElement::basis(params, *b));
        for (i, c) in image.coeffs().iter().enumerate() {
            matrix[(i, j)] = c.clone();
        }
    }
    let determinant = matrix.determinant();
    BasisChange {
        matrix,
        determinant,
    }
}

/// Every relation (presentation and derived), the odd-index identities
/// `d_i − 2 = ψ^i(φ)`, `d_k − d_0 = ψ^k(φ)` for `n ≥ 4`, and the
/// `4kφ = f(φ)φ²` factorisation, all checked exactly in `R(Q_{4k})`.
pub fn verify_relations_in_r(params: GroupParams) -> Result<Report, KRingError> {
    let rels = relations_for(params)?;
    let mut emb = Embedder::new(params);
    let mut report = Report::new(format!(
        "relations in R(Q_{}) (n = {})",
        params.order(),
        params.n()
    ));
    let two = RepElement::integer(params, Integer::from(2));

    for rule in rels.rules() {
        let image = emb.embed_poly(&rule.difference());
        report.push(Check::new(
            format!("{}: {rule}", rule.id),
            image.is_zero(),
            residual(&image),
        ));
    }

    let k = params.k();
    for i in (1..k).step_by(2) {
        let psi = emb.eval_phi_poly(psi_series(i)?.as_poly());
        let diff = &(&canonical_d(params, i as i64) - &two) - &psi;
        report.push(Check::new(
            format!("d_{i} − 2 = ψ^{i}(φ)"),
            diff.is_zero(),
            residual(&diff),
        ));
    }
    if params.n() >= 4 {
        let psi = emb.eval_phi_poly(psi_series(k)?.as_poly());
        let diff = &(&canonical_d(params, k as i64) - &canonical_d(params, 0)) - &psi;
        report.push(Check::new(
            format!("d_{k} − d_0 = ψ^{k}(φ)"),
            diff.is_zero(),
            residual(&diff),
        ));
    }

    let f = four_k_cofactor(k)?;
    let expr = &KPoly::term(Monomial::phi_pow(1), Integer::from(4 * k))
        - &(&KPoly::from_int_poly(&f) * &KPoly::term(Monomial::phi_pow(2), 1));
    let reduced = rels.reduce(&expr);
    let image = emb.embed_poly(&expr);
    report.push(Check::new(
        format!("{}φ = f(φ)φ² with f = {}", 4 * k, f.display_in("φ")),
        reduced.is_zero() && image.is_zero(),
        if reduced.is_zero() {
            String::new()
        } else {
            reduced.to_string()
        },
    ));
    Ok(report)
}

fn residual(r: &RepElement) -> String {
    if r.is_zero() {
        String::new()
    } else {
        format!("residual {r}")
    }
}

/// Outcome of reducing `(φ + 2)·(relation 6)` with relations 1, 2, 4, 5 only.
#[derive(Debug, Clone)]
pub struct Redundancy {
    pub reduced: KPoly,
    pub g: PhiPoly,
    /// `+1` or `−1` when the result is `±g_{2k}(φ)`.
    pub sign: Option<i8>,
}

impl Redundancy {
    pub fn holds(&self) -> bool {
        self.sign.is_some()
    }
}

pub fn relation3_redundancy(params: GroupParams) -> Result<Redundancy, KRingError> {
    let full = relations_for(params)?;
    let restricted = full.restricted(&[
        RelationId::R1,
        RelationId::R2,
        RelationId::R4,
        RelationId::R5,
    ]);
    debug_assert!(!restricted.contains(RelationId::R3) && !restricted.contains(RelationId::R6));
    let r6 = full
        .rule(RelationId::R6)
        .expect("relation 6 present")
        .difference();
    let factor = &KPoly::phi() + &KPoly::constant(2);
    let reduced = restricted.reduce(&(&factor * &r6));
    let g = g_poly(params.k())?;
    let gk = KPoly::from_phi_poly(&g);
    let sign = if reduced == gk {
        Some(1)
    } else if reduced == -&gk {
        Some(-1)
    } else {
        None
    };
    Ok(Redundancy { reduced, g, sign })
}

pub fn verify_relation3_redundant(params: GroupParams) -> bool {
    relation3_redundancy(params).is_ok_and(|r| r.holds())
}

fn basis_products_close(rels: &RelationSet) -> Result<(), (KBasis, KBasis, KPoly)> {
    let basis = KBasis::all(rels.params);
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i..] {
            let prod = KPoly::monomial(a.monomial().times(&b.monomial()));
            let red = rels.reduce(&prod);
            if KElement::from_reduced(rels.params, &red).is_err() {
                return Err((*a, *b, red));
            }
        }
    }
    Ok(())
}

/// For each presentation relation, dropping it leaves some product of two basis
/// elements outside the normal-form span; with all rules present, every basis
/// product closes.
pub fn verify_minimality_witness(params: GroupParams) -> Result<Report, KRingError> {
    let full = relations_for(params)?;
    let mut report = Report::new(format!("minimality witnesses (n = {})", params.n()));
    report.push(match basis_products_close(&full) {
        Ok(()) => Check::new("full relation set closes all basis products", true, ""),
        Err((a, b, red)) => Check::new(
            "full relation set closes all basis products",
            false,
            format!("{a}·{b} reduces to {red}"),
        ),
    });
    for id in RelationId::PRESENTATION {
        let dropped = full.without(id);
        report.push(match basis_products_close(&dropped) {
            Err((a, b, red)) => Check::new(
                format!("drop {id}"),
                true,
                format!("{a}·{b} stays outside the basis as {red}"),
            ),
            Ok(()) => Check::new(
                format!("drop {id}"),
                false,
                "no witness: all basis products still close",
            ),
        });
    }
    Ok(report)
}

/// `v1²v2, v1v2², v1²φ, v2²φ, v1v2φ, v1φ^{k+1}, v2φ^{k+1}`.
pub fn critical_monomials(params: GroupParams) -> Vec<Monomial> {
    let top = params.k() as u32 + 1;
    vec![
        Monomial::new(2, 1, 0),
        Monomial::new(1, 2, 0),
        Monomial::new(2, 0, 1),
        Monomial::new(0, 2, 1),
        Monomial::new(1, 1, 1),
        Monomial::new(1, 0, top),
        Monomial::new(0, 1, top),
    ]
}

/// Every way of starting the rewrite at a critical monomial ends in the same normal form.
pub fn verify_local_confluence(params: GroupParams) -> Result<Report, KRingError> {
    let rels = relations_for(params)?;
    let mut report = Report::new(format!("local confluence (n = {})", params.n()));
    for m in critical_monomials(params) {
        let results: Vec<(RelationId, KPoly)> = rels
            .rules()
            .iter()
            .filter(|r| r.lhs.divides(&m))
            .map(|r| (r.id, rels.reduce_via(m, r)))
            .collect();
        let agree = results.len() >= 2 && results.windows(2).all(|w| w[0].1 == w[1].1);
        let routes: Vec<String> = results
            .iter()
            .map(|(id, p)| format!("via {}: {p}", id.number()))
            .collect();
        report.push(Check::new(m.to_string(), agree, routes.join("; ")));
    }
    Ok(report)
}

/// `embed(a ⋆ b) = embed(a)·embed(b)` for all normal-form basis pairs.
pub fn verify_commuting_square(params: GroupParams) -> Result<Report, KRingError> {
    let rels = relations_for(params)?;
    let mut emb = Embedder::new(params);
    let basis = KBasis::all(params);
    let images: Vec<RepElement> = basis
        .iter()
        .map(|b| emb.embed(&KElement::basis(params, *b)))
        .collect();
    let mut report = Report::new(format!(
        "normal-form product vs R(Q) product (n = {})",
        params.n()
    ));
    let mut failures = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let nf =
                rels.multiply_nf(&KElement::basis(params, *a), &KElement::basis(params, *b))?;
            if emb.embed(&nf) != multiply(&images[i], &images[j]) {
                failures.push(format!("{a}·{b}"));
            }
        }
    }
    let pairs = basis.len() * basis.len();
    report.push(Check::new(
        "commuting square on all basis pairs",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{pairs} pairs")
        } else {
            format!("failing: {}", failures.join(", "))
        },
    ));
    let change = basis_change_matrix(params);
    report.push(Check::new(
        "basis change matrix is unimodular",
        change.is_unimodular(),
        format!(
            "{0}×{0}, det = {1}",
            change.matrix.rows(),
            change.determinant
        ),
    ));
    Ok(report)
}
