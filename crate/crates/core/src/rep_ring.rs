//! The representation ring `R(Q_{4k})` of the generalized quaternion group of
//! order `2^n = 2m = 4k`.
//!
//! Elements are integer vectors over the irreducible basis
//! `{1, η1, η2, η3, d_1, ..., d_{k-1}}`. Multiplication comes from the product
//! rules `η_a η_b` (Klein four-group), `η1 d_i = d_i`, `η2 d_i = η3 d_i = d_{k-i}`
//! and `d_i d_j = d_{i+j} + d_{i-j}`, with `d_i = d_{-i} = d_{m-i}`,
//! `d_0 = 1 + η1` and `d_k = η2 + η3`.
//!
//! An independent character table lives alongside: characters take values in
//! `Z[ζ]`, `ζ = exp(2πi/2k)`, and [`decompose`] inverts the character map by
//! orthogonality. [`verify_structure_constants`] checks the two agree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{ArithError, CyclotomicInt, Integer};
use crate::report::{Check, Report};

/// Largest `n` accepted anywhere; keeps `k = 2^{n-2}` comfortably in memory.
pub const MAX_N: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("n must satisfy 3 <= n <= {MAX_N}, got {0}")]
    InvalidN(u32),
    #[error("elements belong to different groups (n = {0} vs n = {1})")]
    MismatchedGroup(u32, u32),
    #[error(
        "class function is not a virtual character: inner product with {label} is not an integer"
    )]
    NotVirtualCharacter { label: Irrep },
    #[error("malformed element JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `Q_{2^n}` with `k = 2^{n-2}` and `m = 2k = 2^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    n: u32,
    k: usize,
}

impl GroupParams {
    pub fn new(n: u32) -> Result<Self, RepError> {
        if !(3..=MAX_N).contains(&n) {
            return Err(RepError::InvalidN(n));
        }
        Ok(GroupParams { n, k: 1 << (n - 2) })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        2 * self.k
    }

    /// Group order `4k = 2^n`.
    pub fn order(&self) -> usize {
        4 * self.k
    }

    /// Number of irreducibles, which is also the number of conjugacy classes.
    pub fn rank(&self) -> usize {
        self.k + 3
    }

    /// Folds any index into `[0, k]` using `d_{-i} = d_i` and `d_i = d_{m-i}`.
    pub fn fold_d_index(&self, i: i64) -> usize {
        let m = self.m() as i64;
        let r = i.rem_euclid(m) as usize;
        if r > self.k {
            self.m() - r
        } else {
            r
        }
    }
}

/// Irreducible representation labels, in the fixed basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irrep {
    One,
    Eta1,
    Eta2,
    Eta3,
    /// `d_i` for `1 <= i <= k - 1`.
    D(usize),
}

impl Irrep {
    pub fn index(self) -> usize {
        match self {
            Irrep::One => 0,
            Irrep::Eta1 => 1,
            Irrep::Eta2 => 2,
            Irrep::Eta3 => 3,
            Irrep::D(i) => 3 + i,
        }
    }

    pub fn from_index(idx: usize) -> Self {
        match idx {
            0 => Irrep::One,
            1 => Irrep::Eta1,
            2 => Irrep::Eta2,
            3 => Irrep::Eta3,
            i => Irrep::D(i - 3),
        }
    }

    pub fn all(params: GroupParams) -> impl Iterator<Item = Irrep> {
        (0..params.rank()).map(Irrep::from_index)
    }

    fn klein(self) -> Option<(u8, u8)> {
        match self {
            Irrep::One => Some((0, 0)),
            Irrep::Eta1 => Some((1, 0)),
            Irrep::Eta2 => Some((0, 1)),
            Irrep::Eta3 => Some((1, 1)),
            Irrep::D(_) => None,
        }
    }

    fn from_klein(bits: (u8, u8)) -> Self {
        match bits {
            (0, 0) => Irrep::One,
            (1, 0) => Irrep::Eta1,
            (0, 1) => Irrep::Eta2,
            _ => Irrep::Eta3,
        }
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irrep::One => f.write_str("1"),
            Irrep::Eta1 => f.write_str("η1"),
            Irrep::Eta2 => f.write_str("η2"),
            Irrep::Eta3 => f.write_str("η3"),
            Irrep::D(i) => write!(f, "d_{i}"),
        }
    }
}

/// A virtual representation: integer coefficients over the irreducible basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepElement {
    params: GroupParams,
    coeffs: Vec<Integer>,
}

impl RepElement {
    pub fn zero(params: GroupParams) -> Self {
        RepElement {
            params,
            coeffs: vec![Integer::zero(); params.rank()],
        }
    }

    pub fn one(params: GroupParams) -> Self {
        Self::basis(params, Irrep::One)
    }

    pub fn integer(params: GroupParams, c: Integer) -> Self {
        let mut r = Self::zero(params);
        r.coeffs[0] = c;
        r
    }

    pub fn basis(params: GroupParams, label: Irrep) -> Self {
        let mut r = Self::zero(params);
        r.coeffs[label.index()] = Integer::one();
        r
    }

    pub fn from_coeffs(params: GroupParams, coeffs: Vec<Integer>) -> Self {
        assert_eq!(
            coeffs.len(),
            params.rank(),
            "coefficient vector has wrong length"
        );
        RepElement { params, coeffs }
    }

    /// `φ = d_1 − 2`.
    pub fn phi(params: GroupParams) -> Self {
        let mut r = canonical_d(params, 1);
        r.coeffs[0] -= 2;
        r
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, label: Irrep) -> &Integer {
        &self.coeffs[label.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Virtual dimension.
    pub fn dimension(&self) -> Integer {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i < 4 { c.clone() } else { c * 2 })
            .sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Irrep, &Integer)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Irrep::from_index(i), c))
    }

    pub fn scale(&self, c: &Integer) -> Self {
        RepElement {
            params: self.params,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Adds `c · d_i`, expanding the folded endpoints `d_0` and `d_k`.
    pub fn add_d(&mut self, i: i64, c: &Integer) {
        let k = self.params.k;
        match self.params.fold_d_index(i) {
            0 => {
                self.coeffs[0] += c;
                self.coeffs[1] += c;
            }
            j if j == k => {
                self.coeffs[2] += c;
                self.coeffs[3] += c;
            }
            j => self.coeffs[3 + j] += c,
        }
    }

    fn add_scaled(&mut self, other: &RepElement, c: &Integer) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * c;
        }
    }

    fn add_basis_product(&mut self, a: Irrep, b: Irrep, c: &Integer) {
        let k = self.params.k as i64;
        match (a.klein(), b.klein(), a, b) {
            (Some(x), Some(y), _, _) => {
                let label = Irrep::from_klein((x.0 ^ y.0, x.1 ^ y.1));
                self.coeffs[label.index()] += c;
            }
            (Some(_), None, eta, Irrep::D(j)) | (None, Some(_), Irrep::D(j), eta) => {
                let j = j as i64;
                match eta {
                    Irrep::One | Irrep::Eta1 => self.add_d(j, c),
                    _ => self.add_d(k - j, c),
                }
            }
            (None, None, Irrep::D(i), Irrep::D(j)) => {
                let (i, j) = (i as i64, j as i64);
                self.add_d(i + j, c);
                self.add_d(i - j, c);
            }
            _ => unreachable!("klein() is None exactly for D labels"),
        }
    }

    pub fn try_mul(&self, other: &RepElement) -> Result<RepElement, RepError> {
        if self.params != other.params {
            return Err(RepError::MismatchedGroup(self.params.n, other.params.n));
        }
        Ok(multiply(self, other))
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        for (key, label) in [
            ("one", Irrep::One),
            ("eta1", Irrep::Eta1),
            ("eta2", Irrep::Eta2),
            ("eta3", Irrep::Eta3),
        ] {
            let c = self.coeff(label);
            if !c.is_zero() {
                obj.insert(key.into(), json!(c.to_string()));
            }
        }
        let mut d = Map::new();
        for i in 1..self.params.k {
            let c = self.coeff(Irrep::D(i));
            if !c.is_zero() {
                d.insert(i.to_string(), json!(c.to_string()));
            }
        }
        if !d.is_empty() {
            obj.insert("d".into(), Value::Object(d));
        }
        Value::Object(obj)
    }

    pub fn from_json(params: GroupParams, value: &Value) -> Result<Self, RepError> {
        fn parse(v: &Value) -> Result<Integer, RepError> {
            v.as_str()
                .and_then(|s| s.parse::<BigInt>().ok())
                .ok_or_else(|| RepError::Json(format!("expected decimal string, got {v}")))
        }
        let obj = value
            .as_object()
            .ok_or_else(|| RepError::Json("expected an object".into()))?;
        let mut r = Self::zero(params);
        for (key, v) in obj {
            match key.as_str() {
                "one" => r.coeffs[0] = parse(v)?,
                "eta1" => r.coeffs[1] = parse(v)?,
                "eta2" => r.coeffs[2] = parse(v)?,
                "eta3" => r.coeffs[3] = parse(v)?,
                "d" => {
                    let d = v
                        .as_object()
                        .ok_or_else(|| RepError::Json("\"d\" must be an object".into()))?;
                    for (i, c) in d {
                        let i: usize = i
                            .parse()
                            .ok()
                            .filter(|i| (1..params.k).contains(i))
                            .ok_or_else(|| RepError::Json(format!("d index {i} out of range")))?;
                        r.coeffs[3 + i] = parse(c)?;
                    }
                }
                other => return Err(RepError::Json(format!("unknown key {other}"))),
            }
        }
        Ok(r)
    }
}

impl fmt::Display for RepElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (label, c) in self.terms() {
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match (label, mag.is_one()) {
                (Irrep::One, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{label}")?,
                (_, false) => write!(f, "{mag}{label}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Basis expansion of `d_i` for any integer `i`.
pub fn canonical_d(params: GroupParams, i: i64) -> RepElement {
    let mut r = RepElement::zero(params);
    r.add_d(i, &Integer::one());
    r
}

/// Ring product. Panics if the operands come from different groups; use
/// [`RepElement::try_mul`] for a fallible version.
pub fn multiply(a: &RepElement, b: &RepElement) -> RepElement {
    assert_eq!(
        a.params, b.params,
        "multiplying elements of different groups"
    );
    let mut out = RepElement::zero(a.params);
    for (la, ca) in a.terms() {
        for (lb, cb) in b.terms() {
            out.add_basis_product(la, lb, &(ca * cb));
        }
    }
    out
}

impl Add for &RepElement {
    type Output = RepElement;
    fn add(self, rhs: &RepElement) -> RepElement {
        assert_eq!(
            self.params, rhs.params,
            "adding elements of different groups"
        );
        let mut out = self.clone();
        out.add_scaled(rhs, &Integer::one());
        out
    }
}

impl Sub for &RepElement {
    type Output = RepElement;
    fn sub(self, rhs: &RepElement) -> RepElement {
        assert_eq!(
            self.params, rhs.params,
            "subtracting elements of different groups"
        );
        let mut out = self.clone();
        out.add_scaled(rhs, &-Integer::one());
        out
    }
}

impl Neg for &RepElement {
    type Output = RepElement;
    fn neg(self) -> RepElement {
        self.scale(&-Integer::one())
    }
}

impl Mul for &RepElement {
    type Output = RepElement;
    fn mul(self, rhs: &RepElement) -> RepElement {
        multiply(self, rhs)
    }
}

/// Multiplies by `φ = d_1 − 2` in `O(k)`; used for building powers of `φ`.
pub fn mul_by_phi(a: &RepElement) -> RepElement {
    let d1 = Irrep::D(1);
    let mut out = a.scale(&Integer::from(-2));
    for (label, c) in a.terms() {
        out.add_basis_product(label, d1, c);
    }
    out
}

/// `[1, φ, φ², ..., φ^max]` in `R(Q_{4k})`.
pub fn phi_powers(params: GroupParams, max: usize) -> Vec<RepElement> {
    let mut powers = Vec::with_capacity(max + 1);
    powers.push(RepElement::one(params));
    for j in 1..=max {
        let next = mul_by_phi(&powers[j - 1]);
        powers.push(next);
    }
    powers
}

/// Conjugacy classes in the frozen order `[e], [x^k], [x^1..x^{k-1}], [y], [xy]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConjClass {
    Identity,
    Central,
    Rotation(usize),
    Y,
    XY,
}

impl ConjClass {
    pub fn all(params: GroupParams) -> Vec<ConjClass> {
        let mut v = vec![ConjClass::Identity, ConjClass::Central];
        v.extend((1..params.k).map(ConjClass::Rotation));
        v.push(ConjClass::Y);
        v.push(ConjClass::XY);
        v
    }

    pub fn size(self, params: GroupParams) -> usize {
        match self {
            ConjClass::Identity | ConjClass::Central => 1,
            ConjClass::Rotation(_) => 2,
            ConjClass::Y | ConjClass::XY => params.k,
        }
    }

    /// Exponent `r` with the class containing `x^r`, for classes inside `<x>`.
    fn x_power(self, params: GroupParams) -> Option<usize> {
        match self {
            ConjClass::Identity => Some(0),
            ConjClass::Central => Some(params.k),
            ConjClass::Rotation(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjClass::Identity => f.write_str("[e]"),
            ConjClass::Central => f.write_str("[x^k]"),
            ConjClass::Rotation(r) => write!(f, "[x^{r}]"),
            ConjClass::Y => f.write_str("[y]"),
            ConjClass::XY => f.write_str("[xy]"),
        }
    }
}

/// Values on the conjugacy classes, in [`ConjClass::all`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    params: GroupParams,
    values: Vec<CyclotomicInt>,
}

impl ClassFunction {
    pub fn zero(params: GroupParams) -> Self {
        ClassFunction {
            params,
            values: vec![CyclotomicInt::zero(params.k); params.rank()],
        }
    }

    pub fn new(params: GroupParams, values: Vec<CyclotomicInt>) -> Self {
        assert_eq!(
            values.len(),
            params.rank(),
            "class function has wrong length"
        );
        assert!(values.iter().all(|v| v.order_half() == params.k));
        ClassFunction { params, values }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn values(&self) -> &[CyclotomicInt] {
        &self.values
    }

    pub fn value(&self, class: ConjClass) -> &CyclotomicInt {
        let idx = match class {
            ConjClass::Identity => 0,
            ConjClass::Central => 1,
            ConjClass::Rotation(r) => 1 + r,
            ConjClass::Y => self.params.k + 1,
            ConjClass::XY => self.params.k + 2,
        };
        &self.values[idx]
    }

    pub fn pointwise_mul(&self, other: &ClassFunction) -> Result<ClassFunction, RepError> {
        if self.params != other.params {
            return Err(RepError::MismatchedGroup(self.params.n, other.params.n));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.try_mul(b))
            .collect::<Result<_, _>>()?;
        Ok(ClassFunction {
            params: self.params,
            values,
        })
    }

    /// Invariant under `ζ ↦ ζ^-1` on every class.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.conj() == *v)
    }
}

/// Character of a single irreducible.
pub fn character(params: GroupParams, label: Irrep) -> ClassFunction {
    let k = params.k;
    let values = ConjClass::all(params)
        .into_iter()
        .map(|class| {
            let int = |v: i64| CyclotomicInt::from_integer(k, Integer::from(v));
            let sign = |r: usize| if r.is_multiple_of(2) { 1 } else { -1 };
            match (label, class.x_power(params)) {
                (Irrep::One, _) => int(1),
                (Irrep::Eta1, Some(_)) => int(1),
                (Irrep::Eta1, None) => int(-1),
                (Irrep::Eta2 | Irrep::Eta3, Some(r)) => int(sign(r)),
                (Irrep::Eta2, None) => int(if class == ConjClass::Y { 1 } else { -1 }),
                (Irrep::Eta3, None) => int(if class == ConjClass::Y { -1 } else { 1 }),
                (Irrep::D(i), Some(r)) => {
                    let e = (i * r) as i64;
                    let mut v = CyclotomicInt::zeta_pow(k, e);
                    v.add_zeta_pow(-e, &Integer::one());
                    v
                }
                (Irrep::D(_), None) => CyclotomicInt::zero(k),
            }
        })
        .collect();
    ClassFunction { params, values }
}

/// All irreducible characters in basis order.
pub fn character_table(params: GroupParams) -> Vec<ClassFunction> {
    Irrep::all(params).map(|l| character(params, l)).collect()
}

/// Character of a virtual representation.
pub fn character_of(r: &RepElement) -> ClassFunction {
    let params = r.params;
    let mut values = vec![CyclotomicInt::zero(params.k); params.rank()];
    for (label, c) in r.terms() {
        let chi = character(params, label);
        for (v, x) in values.iter_mut().zip(&chi.values) {
            *v = v.try_add(&x.scale(c)).expect("same order by construction");
        }
    }
    ClassFunction { params, values }
}

/// `Σ_C |C| f(C) conj(g(C))`, i.e. `4k` times the usual inner product.
fn weighted_pairing(f: &ClassFunction, g: &ClassFunction) -> Result<CyclotomicInt, RepError> {
    let params = f.params;
    let mut acc = CyclotomicInt::zero(params.k);
    for (class, (a, b)) in ConjClass::all(params)
        .into_iter()
        .zip(f.values.iter().zip(&g.values))
    {
        acc.add_scaled_product_conj(a, b, &Integer::from(class.size(params)))?;
    }
    Ok(acc)
}

/// `⟨f, g⟩ = (1/4k) Σ_C |C| f(C) conj(g(C))`, when it is an integer.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Option<Integer> {
    if f.params != g.params {
        return None;
    }
    let raw = weighted_pairing(f, g).ok()?;
    let order = Integer::from(f.params.order());
    raw.as_integer()
        .filter(|v| (*v % &order).is_zero())
        .map(|v| v / &order)
}

/// Expresses a class function in the irreducible basis via orthogonality.
pub fn decompose(f: &ClassFunction) -> Result<RepElement, RepError> {
    decompose_with(&character_table(f.params), f)
}

/// [`decompose`] against a precomputed [`character_table`].
pub fn decompose_with(table: &[ClassFunction], f: &ClassFunction) -> Result<RepElement, RepError> {
    let params = f.params;
    let mut r = RepElement::zero(params);
    for (label, chi) in Irrep::all(params).zip(table) {
        r.coeffs[label.index()] =
            inner_product(f, chi).ok_or(RepError::NotVirtualCharacter { label })?;
    }
    Ok(r)
}

/// Checks `multiply` against the character oracle on every ordered basis pair.
pub fn verify_structure_constants(params: GroupParams) -> Report {
    let table = character_table(params);
    let labels: Vec<Irrep> = Irrep::all(params).collect();
    let pairs: Vec<(Irrep, Irrep)> = labels
        .iter()
        .flat_map(|&a| labels.iter().map(move |&b| (a, b)))
        .collect();
    let checks: Vec<Check> = pairs
        .into_par_iter()
        .map(|(a, b)| {
            let rule = multiply(&RepElement::basis(params, a), &RepElement::basis(params, b));
            let oracle = table[a.index()]
                .pointwise_mul(&table[b.index()])
                .and_then(|f| decompose_with(&table, &f));
            let (pass, detail) = match oracle {
                Ok(o) if o == rule => (true, format!("{rule}")),
                Ok(o) => (false, format!("rules give {rule}, characters give {o}")),
                Err(e) => (false, e.to_string()),
            };
            Check::new(format!("{a}·{b}"), pass, detail)
        })
        .collect();
    let mut report = Report::new(format!(
        "structure constants vs characters (n = {})",
        params.n
    ));
    for c in checks {
        report.push(c);
    }
    report
}

/// `⟨χ_a, χ_b⟩ = δ_ab` for all irreducible pairs, plus the class-size count.
pub fn verify_orthogonality(params: GroupParams) -> Report {
    let table = character_table(params);
    let mut report = Report::new(format!("character orthogonality (n = {})", params.n));
    let total: usize = ConjClass::all(params).iter().map(|c| c.size(params)).sum();
    report.push(Check::new(
        "class sizes sum to group order",
        total == params.order(),
        format!("{total} vs {}", params.order()),
    ));
    let mut bad = Vec::new();
    for a in Irrep::all(params) {
        for b in Irrep::all(params) {
            let expected = Integer::from(u8::from(a == b));
            if inner_product(&table[a.index()], &table[b.index()]) != Some(expected) {
                bad.push(format!("({a}, {b})"));
            }
        }
    }
    let pairs = params.rank() * params.rank();
    report.push(Check::new(
        "⟨χ_a, χ_b⟩ = δ_ab",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{pairs} pairs")
        } else {
            format!("failing: {}", bad.join(", "))
        },
    ));
    report.push(Check::new(
        "irreducible characters are real",
        table.iter().all(ClassFunction::is_real),
        String::new(),
    ));
    report
}
