//! Adams-operation polynomials `ψ^i(φ)` and the relation polynomial
//! `g_{2k}(φ) = ψ^{k+1}(φ) − ψ^{k−1}(φ)`.
//!
//! `ψ^i` has two independent constructions, each registered under a name:
//!
//! * `series`: the closed form
//!   `Σ_{j=1}^{i} C(i,j)·C(i+j−1,j)/C(2j−1,j) · φ^j`, evaluated over the
//!   rationals with integrality enforced on every coefficient;
//! * `chebyshev`: `t_i(φ + 2) − 2`, where `t_i(z + z^-1) = z^i + z^-i`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{
    binomial, chebyshev_t, expect_integral, ArithError, IntPoly, Integer, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdamsError {
    #[error("ψ^i needs i >= 1, got {0}")]
    InvalidDegree(usize),
    #[error("g_2k needs k >= 2, got {0}")]
    InvalidK(usize),
    #[error("polynomial has nonzero constant term {0}")]
    NonzeroConstant(Integer),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("unknown construction {0:?}")]
    UnknownConstruction(String),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// Integer polynomial in `φ` (or `w`) with zero constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PhiPoly(IntPoly);

impl PhiPoly {
    pub fn new(poly: IntPoly) -> Result<Self, AdamsError> {
        let c = poly.coeff(0);
        if c.is_zero() {
            Ok(PhiPoly(poly))
        } else {
            Err(AdamsError::NonzeroConstant(c))
        }
    }

    pub fn zero() -> Self {
        PhiPoly(IntPoly::zero())
    }

    /// The polynomial `φ`.
    pub fn phi() -> Self {
        PhiPoly(IntPoly::x())
    }

    /// Builds from coefficients of `φ^1, φ^2, ...`.
    pub fn from_phi_coeffs(coeffs: &[i64]) -> Self {
        let mut v = vec![0];
        v.extend_from_slice(coeffs);
        PhiPoly(IntPoly::from_i64s(&v))
    }

    pub fn as_poly(&self) -> &IntPoly {
        &self.0
    }

    pub fn into_poly(self) -> IntPoly {
        self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn coeff(&self, j: usize) -> Integer {
        self.0.coeff(j)
    }

    pub fn is_monic(&self) -> bool {
        self.0.leading().is_some_and(One::is_one)
    }

    /// Nonzero `(exponent, coefficient)` pairs, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Integer)> {
        self.0
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, other: &PhiPoly) -> PhiPoly {
        PhiPoly(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &PhiPoly) -> PhiPoly {
        PhiPoly(&self.0 - &other.0)
    }

    /// `self(inner(φ))`, truncated at `bound` when given.
    pub fn compose(&self, inner: &PhiPoly, bound: Option<usize>) -> PhiPoly {
        PhiPoly(match bound {
            Some(b) => self.0.compose_truncated(&inner.0, b),
            None => self.0.compose(&inner.0),
        })
    }

    pub fn truncate(&self, bound: usize) -> PhiPoly {
        PhiPoly(self.0.truncate(bound))
    }

    pub fn display_in(&self, var: &str) -> String {
        self.0.display_in(var)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(j, c)| json!([j, c.to_string()]))
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<Self, AdamsError> {
        let bad = |msg: &str| AdamsError::Json(msg.to_string());
        let mut coeffs: BTreeMap<usize, Integer> = BTreeMap::new();
        let mut last = 0;
        for pair in value.as_array().ok_or_else(|| bad("expected an array"))? {
            let pair = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("expected pairs"))?;
            let j = pair[0]
                .as_u64()
                .filter(|&j| j >= 1 && j > last)
                .ok_or_else(|| bad("exponents must be ascending and >= 1"))?;
            last = j;
            let c: BigInt = pair[1]
                .as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("coefficients must be decimal strings"))?;
            coeffs.insert(j as usize, c);
        }
        let len = coeffs.keys().next_back().map_or(0, |j| j + 1);
        let mut v = vec![Integer::zero(); len];
        for (j, c) in coeffs {
            v[j] = c;
        }
        PhiPoly::new(IntPoly::new(v))
    }
}

impl fmt::Display for PhiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("φ"))
    }
}

/// Closed-form series for `ψ^i`.
pub fn psi_series(i: usize) -> Result<PhiPoly, AdamsError> {
    if i == 0 {
        return Err(AdamsError::InvalidDegree(i));
    }
    let iu = i as u64;
    let mut coeffs = vec![Integer::zero(); i + 1];
    for (j, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let ju = j as u64;
        let num = binomial(iu, j as i64) * binomial(iu + ju - 1, j as i64);
        let den = binomial(2 * ju - 1, j as i64);
        *slot = expect_integral(Rational::new(num, den), j)?;
    }
    PhiPoly::new(IntPoly::new(coeffs))
}

/// `t_i(φ + 2) − 2`, from the Chebyshev-type recurrence.
pub fn psi_oracle(i: usize) -> Result<PhiPoly, AdamsError> {
    if i == 0 {
        return Err(AdamsError::InvalidDegree(i));
    }
    let shifted = chebyshev_t(i).shift(&Integer::from(2));
    PhiPoly::new(&shifted - &IntPoly::constant(Integer::from(2)))
}

/// `g_{2k}(φ) = 4kφ + Σ_{j=2}^{k} (2k²+j−1)/((j−1)(2j−1))·C(k+j−2, 2j−3)·φ^j + φ^{k+1}`.
pub fn g_poly(k: usize) -> Result<PhiPoly, AdamsError> {
    if k < 2 {
        return Err(AdamsError::InvalidK(k));
    }
    let kb = Integer::from(k);
    let mut coeffs = vec![Integer::zero(); k + 2];
    coeffs[1] = &kb * 4;
    for (j, slot) in coeffs.iter_mut().enumerate().take(k + 1).skip(2) {
        let ji = Integer::from(j);
        let num = (Integer::from(2) * &kb * &kb + &ji - 1)
            * binomial((k + j - 2) as u64, 2 * j as i64 - 3);
        let den = (&ji - 1) * (Integer::from(2) * &ji - 1);
        *slot = expect_integral(Rational::new(num, den), j)?;
    }
    coeffs[k + 1] = Integer::one();
    PhiPoly::new(IntPoly::new(coeffs))
}

/// `g_poly(k) = ψ^{k+1} − ψ^{k−1}`, both sides from the series.
pub fn verify_g_identity(k: usize) -> bool {
    match (
        g_poly(k),
        psi_series(k + 1),
        psi_series(k.saturating_sub(1)),
    ) {
        (Ok(g), Ok(hi), Ok(lo)) => g == hi.sub(&lo),
        _ => false,
    }
}

/// `ψ^i ∘ ψ^j = ψ^{ij}` up to degree `degree_bound`.
pub fn compose_check(i: usize, j: usize, degree_bound: usize) -> bool {
    let (Ok(pi), Ok(pj), Ok(pij)) = (psi_series(i), psi_series(j), psi_series(i * j)) else {
        return false;
    };
    pi.compose(&pj, Some(degree_bound)) == pij.truncate(degree_bound)
}

/// `f` with `4kφ = f(φ)·φ²` modulo `g_{2k}`, i.e. `f = −(g_{2k} − 4kφ)/φ²`.
pub fn four_k_cofactor(k: usize) -> Result<IntPoly, AdamsError> {
    let g = g_poly(k)?;
    let linear = IntPoly::monomial(Integer::from(4 * k), 1);
    let rest = &g.0 - &linear;
    let f = rest
        .div_x_pow(2)
        .expect("g_2k minus its linear term starts at φ^2");
    Ok(-&f)
}

/// A way of producing `ψ^i(φ)`.
pub trait AdamsConstruction: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn psi(&self, i: usize) -> Result<PhiPoly, AdamsError>;
}

pub struct SeriesConstruction;

impl AdamsConstruction for SeriesConstruction {
    fn name(&self) -> &'static str {
        "series"
    }

    fn description(&self) -> &'static str {
        "closed-form binomial series"
    }

    fn psi(&self, i: usize) -> Result<PhiPoly, AdamsError> {
        psi_series(i)
    }
}

pub struct ChebyshevConstruction;

impl AdamsConstruction for ChebyshevConstruction {
    fn name(&self) -> &'static str {
        "chebyshev"
    }

    fn description(&self) -> &'static str {
        "t_i(φ+2) − 2 via t_{i+1} = c·t_i − t_{i−1}"
    }

    fn psi(&self, i: usize) -> Result<PhiPoly, AdamsError> {
        psi_oracle(i)
    }
}

/// Name-keyed registry of [`AdamsConstruction`]s.
#[derive(Clone)]
pub struct AdamsRegistry {
    entries: Vec<Arc<dyn AdamsConstruction>>,
}

impl AdamsRegistry {
    pub fn empty() -> Self {
        AdamsRegistry {
            entries: Vec::new(),
        }
    }

    pub fn register(&mut self, construction: Arc<dyn AdamsConstruction>) {
        self.entries.retain(|e| e.name() != construction.name());
        self.entries.push(construction);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn AdamsConstruction>, AdamsError> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .cloned()
            .ok_or_else(|| AdamsError::UnknownConstruction(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn AdamsConstruction>> {
        self.entries.iter()
    }
}

impl Default for AdamsRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(SeriesConstruction));
        r.register(Arc::new(ChebyshevConstruction));
        r
    }
}
