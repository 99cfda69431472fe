//! Exact arithmetic substrate: binomials, 2-adic valuations, dense integer
//! polynomials, the Chebyshev-type recurrence `t_i(z + 1/z) = z^i + z^-i`, and
//! cyclotomic integers in `Z[ζ]/(ζ^k + 1)` for `k` a power of two.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("2-adic valuation of zero is infinite")]
    ZeroValuation,
    #[error("cyclotomic orders differ: {0} vs {1}")]
    MismatchedOrder(usize, usize),
    #[error("non-integral coefficient {value} at degree {degree}")]
    NonIntegral { degree: usize, value: Rational },
}

/// `C(n, r)`, zero when `r` lies outside `[0, n]`.
pub fn binomial(n: u64, r: i64) -> Integer {
    if r < 0 || r as u64 > n {
        return Integer::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = Integer::one();
    for t in 0..r {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

pub fn two_adic_valuation(n: &Integer) -> Result<u64, ArithError> {
    n.trailing_zeros().ok_or(ArithError::ZeroValuation)
}

/// Turns an exact rational into an integer, or reports where integrality failed.
pub fn expect_integral(value: Rational, degree: usize) -> Result<Integer, ArithError> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(ArithError::NonIntegral { degree, value })
    }
}

/// Dense polynomial with integer coefficients, `coeffs[j]` multiplying `x^j`.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Integer) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Integer, degree: usize) -> Self {
        let mut coeffs = vec![Integer::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Integer::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, j: usize) -> Integer {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Drops every term of degree above `bound`.
    pub fn truncate(&self, bound: usize) -> Self {
        Self::new(self.coeffs.iter().take(bound + 1).cloned().collect())
    }

    /// Exact division by `x^j`, or `None` if some low coefficient is nonzero.
    pub fn div_x_pow(&self, j: usize) -> Option<Self> {
        if self.coeffs.iter().take(j).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().skip(j).cloned().collect()))
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        self.coeffs
            .iter()
            .rev()
            .fold(Integer::zero(), |acc, c| acc * x + c)
    }

    /// `self(inner(x))`, by Horner's scheme.
    pub fn compose(&self, inner: &IntPoly) -> IntPoly {
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, c| {
            &(&acc * inner) + &IntPoly::constant(c.clone())
        })
    }

    /// `self(inner(x))` with every intermediate product cut at degree `bound`.
    pub fn compose_truncated(&self, inner: &IntPoly, bound: usize) -> IntPoly {
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, c| {
            (&(&acc * inner) + &IntPoly::constant(c.clone())).truncate(bound)
        })
    }

    /// `self(x + shift)`.
    pub fn shift(&self, shift: &Integer) -> IntPoly {
        self.compose(&IntPoly::new(vec![shift.clone(), Integer::one()]))
    }

    /// Human-readable form in the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match j {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(var);
                    if j > 1 {
                        out.push('^');
                        out.push_str(&j.to_string());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![Integer::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// `t_i(c)` with `t_0 = 2`, `t_1 = c`, `t_{i+1} = c·t_i − t_{i−1}`, so that
/// `t_i(z + z^-1) = z^i + z^-i`.
pub fn chebyshev_t(i: usize) -> IntPoly {
    let mut prev = IntPoly::constant(Integer::from(2));
    if i == 0 {
        return prev;
    }
    let c = IntPoly::x();
    let mut cur = c.clone();
    for _ in 1..i {
        let next = &(&c * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// An element `Σ c_j ζ^j` of `Z[ζ]`, `ζ` a primitive `2k`-th root of unity with
/// `k` a power of two, stored reduced modulo `ζ^k = −1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    coeffs: Vec<Integer>,
}

impl CyclotomicInt {
    pub fn zero(k: usize) -> Self {
        assert!(k >= 1, "cyclotomic order must be positive");
        CyclotomicInt {
            coeffs: vec![Integer::zero(); k],
        }
    }

    pub fn from_integer(k: usize, c: Integer) -> Self {
        let mut z = Self::zero(k);
        z.coeffs[0] = c;
        z
    }

    pub fn one(k: usize) -> Self {
        Self::from_integer(k, Integer::one())
    }

    /// `ζ^e` for any integer exponent.
    pub fn zeta_pow(k: usize, e: i64) -> Self {
        let mut z = Self::zero(k);
        z.add_zeta_pow(e, &Integer::one());
        z
    }

    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        assert!(!coeffs.is_empty(), "cyclotomic order must be positive");
        CyclotomicInt { coeffs }
    }

    /// `k`, half the order of `ζ`.
    pub fn order_half(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, if it has no irrational part.
    pub fn as_integer(&self) -> Option<&Integer> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Adds `c·ζ^e`.
    pub fn add_zeta_pow(&mut self, e: i64, c: &Integer) {
        let k = self.coeffs.len() as i64;
        let e = e.rem_euclid(2 * k);
        if e < k {
            self.coeffs[e as usize] += c;
        } else {
            self.coeffs[(e - k) as usize] -= c;
        }
    }

    /// `self += s·a·conj(b)`, in place.
    pub fn add_scaled_product_conj(
        &mut self,
        a: &Self,
        b: &Self,
        s: &Integer,
    ) -> Result<(), ArithError> {
        self.check_order(a)?;
        self.check_order(b)?;
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let xs = x * s;
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    self.add_zeta_pow(i as i64 - j as i64, &(&xs * y));
                }
            }
        }
        Ok(())
    }

    /// Complex conjugation `ζ ↦ ζ^-1`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.coeffs.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_zeta_pow(-(j as i64), c);
            }
        }
        out
    }

    pub fn scale(&self, c: &Integer) -> Self {
        CyclotomicInt {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<(), ArithError> {
        if self.coeffs.len() == other.coeffs.len() {
            Ok(())
        } else {
            Err(ArithError::MismatchedOrder(
                self.coeffs.len(),
                other.coeffs.len(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_order(other)?;
        Ok(CyclotomicInt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_order(other)?;
        Ok(CyclotomicInt {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Product reduced modulo `ζ^k = −1`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_order(other)?;
        let mut out = Self::zero(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.add_zeta_pow((i + j) as i64, &(a * b));
                }
            }
        }
        Ok(out)
    }
}

pub fn cyclo_mul(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<CyclotomicInt, ArithError> {
    a.try_mul(b)
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&IntPoly::new(self.coeffs.clone()).display_in("ζ"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(3, 0), int(1));
        assert_eq!(binomial(4, 7), int(0));
        assert_eq!(binomial(4, -1), int(0));
        assert_eq!(binomial(0, 0), int(1));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=60u64 {
            for r in 1..n as i64 {
                assert_eq!(binomial(n, r), binomial(n - 1, r - 1) + binomial(n - 1, r));
            }
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(two_adic_valuation(&int(8)), Ok(3));
        assert_eq!(two_adic_valuation(&int(12)), Ok(2));
        assert_eq!(two_adic_valuation(&int(-12)), Ok(2));
        // k(2k^2+1)/3 at k = 4: 4·33/3 = 44
        let k = int(4);
        let c = &k * (int(2) * &k * &k + 1) / 3;
        assert_eq!(c, int(44));
        assert_eq!(two_adic_valuation(&c), Ok(2));
        assert_eq!(two_adic_valuation(&int(0)), Err(ArithError::ZeroValuation));
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev_t(0), IntPoly::from_i64s(&[2]));
        assert_eq!(chebyshev_t(1), IntPoly::from_i64s(&[0, 1]));
        assert_eq!(chebyshev_t(2), IntPoly::from_i64s(&[-2, 0, 1]));
        assert_eq!(chebyshev_t(3), IntPoly::from_i64s(&[0, -3, 0, 1]));
        assert_eq!(chebyshev_t(4), IntPoly::from_i64s(&[2, 0, -4, 0, 1]));
    }

    #[test]
    fn chebyshev_at_two_is_two() {
        for i in 0..80 {
            assert_eq!(chebyshev_t(i).eval(&int(2)), int(2), "i = {i}");
        }
    }

    #[test]
    fn chebyshev_matches_power_sums() {
        // z = 2: t_i(2 + 1/2) = 2^i + 2^-i, so 2^i·t_i(5/2) = 4^i + 1;
        // homogenise as Σ a_j 5^j 2^(i-j) = 4^i + 1.
        for i in 0..30usize {
            let t = chebyshev_t(i);
            let lhs: Integer = (0..=i)
                .map(|j| {
                    t.coeff(j)
                        * Integer::from(5).pow(j as u32)
                        * Integer::from(2).pow((i - j) as u32)
                })
                .sum();
            assert_eq!(lhs, Integer::from(4).pow(i as u32) + 1, "i = {i}");
        }
    }

    #[test]
    fn cyclo_examples_k2() {
        let z = CyclotomicInt::zeta_pow(2, 1);
        let one = CyclotomicInt::one(2);
        assert_eq!(
            cyclo_mul(&z, &z).unwrap(),
            CyclotomicInt::from_integer(2, int(-1))
        );
        let a = one.try_add(&z).unwrap();
        let b = one.try_sub(&z).unwrap();
        assert_eq!(
            cyclo_mul(&a, &b).unwrap(),
            CyclotomicInt::from_integer(2, int(2))
        );
        assert_eq!(cyclo_mul(&a, &one).unwrap(), a);
    }

    #[test]
    fn cyclo_mismatch() {
        let a = CyclotomicInt::one(2);
        let b = CyclotomicInt::one(4);
        assert_eq!(cyclo_mul(&a, &b), Err(ArithError::MismatchedOrder(2, 4)));
    }

    #[test]
    fn zeta_reduction_and_conj() {
        let k = 4;
        assert_eq!(
            CyclotomicInt::zeta_pow(k, 4),
            CyclotomicInt::from_integer(k, int(-1))
        );
        assert_eq!(CyclotomicInt::zeta_pow(k, 8), CyclotomicInt::one(k));
        assert_eq!(
            CyclotomicInt::zeta_pow(k, -1),
            CyclotomicInt::zeta_pow(k, 7)
        );
        let z3 = CyclotomicInt::zeta_pow(k, 3);
        assert_eq!(z3.conj(), CyclotomicInt::zeta_pow(k, -3));
        assert_eq!(z3.try_mul(&z3.conj()).unwrap(), CyclotomicInt::one(k));
    }

    #[test]
    fn poly_helpers() {
        let p = IntPoly::from_i64s(&[0, 4, 1]);
        assert_eq!(p.display_in("φ"), "φ^2 + 4φ");
        assert_eq!(IntPoly::from_i64s(&[-2, 0, -1]).display_in("c"), "-c^2 - 2");
        assert_eq!(p.div_x_pow(1), Some(IntPoly::from_i64s(&[4, 1])));
        assert_eq!(p.div_x_pow(2), None);
        // (c^2 - 2) at c = φ + 2 is φ^2 + 4φ + 2
        assert_eq!(
            chebyshev_t(2).shift(&int(2)),
            IntPoly::from_i64s(&[2, 4, 1])
        );
        assert!(expect_integral(Rational::new(int(3), int(2)), 1).is_err());
    }

    fn cyclo(k: usize) -> impl Strategy<Value = CyclotomicInt> {
        prop::collection::vec(-20i64..20, k)
            .prop_map(|v| CyclotomicInt::from_coeffs(v.into_iter().map(Integer::from).collect()))
    }

    proptest! {
        #[test]
        fn cyclo_ring_axioms((a, b, c) in (cyclo(8), cyclo(8), cyclo(8))) {
            let ab = a.try_mul(&b).unwrap();
            prop_assert_eq!(&ab, &b.try_mul(&a).unwrap());
            prop_assert_eq!(ab.try_mul(&c).unwrap(), a.try_mul(&b.try_mul(&c).unwrap()).unwrap());
            let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
            let rhs = ab.try_add(&a.try_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn poly_compose_is_evaluation_compatible(
            p in prop::collection::vec(-9i64..9, 0..6),
            q in prop::collection::vec(-9i64..9, 0..4),
            x in -5i64..5,
        ) {
            let p = IntPoly::from_i64s(&p);
            let q = IntPoly::from_i64s(&q);
            let x = Integer::from(x);
            prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
        }
    }
}
