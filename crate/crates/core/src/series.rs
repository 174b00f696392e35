//! Truncated formal power series in one variable `q` with exact integer
//! coefficients.
//!
//! Every series carries the order `N` up to which its coefficients are
//! trustworthy. Binary operations combine orders conservatively, so a
//! coefficient reported by any operation is always exact. Negative
//! valuations are allowed, which lets the same type carry the Laurent
//! entries of the inverse transfer matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SeriesError;

/// How [`TruncatedSeries::div_qpow`] treats low-order terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivMode {
    /// Demand exact divisibility; the quotient stays a power series.
    Strict,
    /// Shift the valuation down, producing a Laurent series if needed.
    Laurent,
}

/// Sign of the base `a = ±q^e` of a Pochhammer symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// First exponent at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: i64,
    pub left: BigInt,
    pub right: BigInt,
}

/// A series `sum_{t >= valuation} c_t q^t` known exactly for `t <= order`.
///
/// The zero series (to order `N`) has `valuation = N + 1` and no stored
/// coefficients. Nonzero series are normalized so that the first stored
/// coefficient is nonzero.
#[derive(Clone)]
pub struct TruncatedSeries {
    valuation: i64,
    order: i64,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: i64) -> Self {
        Self {
            valuation: order + 1,
            order,
            coeffs: Vec::new(),
        }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(0, 1, order)
    }

    /// `coeff * q^exponent`, truncated at `order`.
    pub fn monomial(exponent: i64, coeff: impl Into<BigInt>, order: i64) -> Self {
        Self::from_terms([(exponent, coeff.into())], order)
    }

    /// Build from a dense coefficient vector starting at `valuation`.
    /// Entries past `order` are dropped; missing entries up to `order` are zero.
    pub fn from_coeffs(valuation: i64, coeffs: Vec<BigInt>, order: i64) -> Self {
        let len = (order - valuation + 1).max(0) as usize;
        let mut coeffs = coeffs;
        coeffs.truncate(len);
        coeffs.resize(len, BigInt::zero());
        let mut s = Self {
            valuation,
            order,
            coeffs,
        };
        s.normalize();
        s
    }

    pub fn from_i64s(valuation: i64, coeffs: &[i64], order: i64) -> Self {
        Self::from_coeffs(
            valuation,
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            order,
        )
    }

    /// Sum of sparse `(exponent, coefficient)` terms; repeated exponents add.
    pub fn from_terms<I>(terms: I, order: i64) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().filter(|(e, _)| *e <= order).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(order);
        };
        let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        let mut s = Self {
            valuation: lo,
            order,
            coeffs,
        };
        s.normalize();
        s
    }

    /// `1 + coeff * q^exponent`, the building block of every q-product.
    pub fn binomial(coeff: i64, exponent: i64, order: i64) -> Self {
        Self::from_terms([(0, BigInt::one()), (exponent, BigInt::from(coeff))], order)
    }

    fn normalize(&mut self) {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) => {}
            Some(idx) => {
                self.coeffs.drain(..idx);
                self.valuation += idx as i64;
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.order + 1;
            }
        }
    }

    /// Lowest exponent with a possibly nonzero coefficient; `order + 1` for zero.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^exponent`.
    ///
    /// # Panics
    /// If `exponent` lies beyond the truncation order.
    pub fn coeff(&self, exponent: i64) -> BigInt {
        assert!(
            exponent <= self.order,
            "coefficient of q^{exponent} requested from a series known to order {}",
            self.order
        );
        if exponent < self.valuation {
            return BigInt::zero();
        }
        self.coeffs[(exponent - self.valuation) as usize].clone()
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(t, c)| (self.valuation + t as i64, c))
    }

    /// Dense coefficients for exponents `0..=order` (requires valuation >= 0).
    pub fn dense(&self) -> Vec<BigInt> {
        assert!(
            self.valuation >= 0 || self.is_zero(),
            "dense view of a Laurent series"
        );
        (0..=self.order.max(-1)).map(|e| self.coeff(e)).collect()
    }

    /// Lower the truncation order. Requests above the current order are clamped.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate((order - self.valuation + 1).max(0) as usize);
        let mut s = Self {
            valuation: self.valuation,
            order,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Multiply by `q^m`; exact, so the order moves with the shift.
    pub fn shift(&self, m: i64) -> Self {
        Self {
            valuation: self.valuation + m,
            order: self.order + m,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        let mut s = Self {
            valuation: self.valuation,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        };
        s.normalize();
        s
    }

    /// Copy with `delta` added to the coefficient of `q^exponent`.
    pub fn with_coeff_added(&self, exponent: i64, delta: i64) -> Self {
        if exponent > self.order {
            return self.clone();
        }
        let mut terms: Vec<(i64, BigInt)> = self.terms().map(|(e, c)| (e, c.clone())).collect();
        terms.push((exponent, BigInt::from(delta)));
        Self::from_terms(terms, self.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let order = self.order.min(other.order);
        let lo = self.valuation.min(other.valuation);
        if lo > order {
            return Self::zero(order);
        }
        let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
        for (e, c) in self.terms().take_while(|(e, _)| *e <= order) {
            coeffs[(e - lo) as usize] += c;
        }
        for (e, c) in other.terms().take_while(|(e, _)| *e <= order) {
            if negate_other {
                coeffs[(e - lo) as usize] -= c;
            } else {
                coeffs[(e - lo) as usize] += c;
            }
        }
        let mut s = Self {
            valuation: lo,
            order,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Cauchy product. Result order is
    /// `min(a.order + b.valuation, b.order + a.valuation)`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        let valuation = self.valuation + other.valuation;
        if self.is_zero() || other.is_zero() || valuation > order {
            return Self::zero(order);
        }
        let len = (order - valuation + 1) as usize;
        // iterate over the sparser operand on the outside
        let (outer, inner) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = vec![BigInt::zero(); len];
        for (s, a) in outer.coeffs.iter().enumerate() {
            if a.is_zero() || s >= len {
                continue;
            }
            for (t, b) in inner.coeffs.iter().enumerate().take(len - s) {
                if !b.is_zero() {
                    coeffs[s + t] += a * b;
                }
            }
        }
        let mut s = Self {
            valuation,
            order,
            coeffs,
        };
        s.normalize();
        s
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Divide by a series whose leading coefficient is `±1`.
    pub fn div_unit(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let Some(lead) = divisor.coeffs.first() else {
            return Err(SeriesError::NotAUnit {
                leading: BigInt::zero(),
            });
        };
        if lead.abs() != BigInt::one() {
            return Err(SeriesError::NotAUnit {
                leading: lead.clone(),
            });
        }
        let vb = divisor.valuation;
        let order = (self.order - vb).min(divisor.order + self.valuation - 2 * vb);
        let valuation = self.valuation - vb;
        if self.is_zero() || valuation > order {
            return Ok(Self::zero(order));
        }
        let len = (order - valuation + 1) as usize;
        let unit: Vec<(usize, &BigInt)> = divisor
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        for t in 0..len {
            let mut acc = self.coeffs.get(t).cloned().unwrap_or_default();
            for &(s, u) in unit.iter().take_while(|(s, _)| *s <= t) {
                let prev = &out[t - s];
                if !prev.is_zero() {
                    acc -= u * prev;
                }
            }
            // lead is ±1, so it is its own inverse
            out.push(acc * lead);
        }
        let mut s = Self {
            valuation,
            order,
            coeffs: out,
        };
        s.normalize();
        Ok(s)
    }

    /// Divide by `q^m`.
    ///
    /// In [`DivMode::Strict`] the coefficients of `q^0, ..., q^{m-1}` must be
    /// known and zero; the first offending term is reported otherwise.
    pub fn div_qpow(&self, m: i64, mode: DivMode) -> Result<Self, SeriesError> {
        assert!(m >= 0, "div_qpow by a negative power");
        if mode == DivMode::Strict {
            if !self.is_zero() && self.valuation < m {
                return Err(SeriesError::NotDivisible {
                    exponent: self.valuation,
                    coefficient: self.coeffs[0].clone(),
                });
            }
            if self.order < m - 1 {
                return Err(SeriesError::InsufficientOrder {
                    needed: m - 1,
                    order: self.order,
                });
            }
        }
        Ok(self.shift(-m))
    }

    /// First exponent (up to the common order) where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<Mismatch> {
        let order = self.order.min(other.order);
        let lo = self.valuation.min(other.valuation);
        (lo..=order).find_map(|e| {
            let (l, r) = (self.coeff(e), other.coeff(e));
            (l != r).then_some(Mismatch {
                exponent: e,
                left: l,
                right: r,
            })
        })
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

/// Equality of all coefficients up to the smaller of the two orders.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [order {}]", self.order)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            valuation: self.valuation,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    valuation: i64,
    order: i64,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            valuation: self.valuation,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = SeriesRepr::deserialize(deserializer)?;
        let expected = (repr.order - repr.valuation + 1).max(0) as usize;
        if repr.coeffs.len() != expected {
            return Err(D::Error::custom(format!(
                "expected {expected} coefficients for valuation {} and order {}, found {}",
                repr.valuation,
                repr.order,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(repr.valuation, coeffs, repr.order))
    }
}

/// `(a)_n = prod_{s=0}^{n-1} (1 - a q^s)` with `a = ±q^base_exponent`,
/// truncated at `order`.
pub fn pochhammer(base_exponent: i64, sign: Sign, n: u32, order: i64) -> TruncatedSeries {
    let c = match sign {
        Sign::Plus => -1,
        Sign::Minus => 1,
    };
    (0..n as i64)
        .map(|s| base_exponent + s)
        .filter(|&e| e <= order)
        .fold(TruncatedSeries::one(order), |acc, e| {
            acc.mul(&TruncatedSeries::binomial(c, e, order))
        })
}

/// Euler's product `(q)_inf`; factors past `q^order` cannot contribute.
pub fn euler_infty(order: i64) -> TruncatedSeries {
    pochhammer(1, Sign::Plus, order.max(0) as u32, order)
}

/// Product of the factors `(1 - q^e)` over the given exponents, skipping
/// those beyond `order`.
pub(crate) fn product_one_minus<I: IntoIterator<Item = i64>>(exponents: I, order: i64) -> TruncatedSeries {
    exponents
        .into_iter()
        .filter(|&e| e <= order)
        .fold(TruncatedSeries::one(order), |acc, e| {
            acc.mul(&TruncatedSeries::binomial(-1, e, order))
        })
}

/// Product of the factors `(1 + q^e)` over the given exponents.
pub(crate) fn product_one_plus<I: IntoIterator<Item = i64>>(exponents: I, order: i64) -> TruncatedSeries {
    exponents
        .into_iter()
        .filter(|&e| e <= order)
        .fold(TruncatedSeries::one(order), |acc, e| {
            acc.mul(&TruncatedSeries::binomial(1, e, order))
        })
}

fn check_ki(k: u32, i: u32) {
    assert!(k >= 2, "modulus parameter k must be at least 2, got {k}");
    assert!((1..=k).contains(&i), "index i must lie in 1..={k}, got {i}");
}

/// The Andrews-Bressoud product
/// `prod_{m>=1} (1-q^{2km})(1-q^{2km-k+i-1})(1-q^{2km-k-i+1}) / (q)_inf`.
pub fn product_side(k: u32, i: u32, order: i64) -> TruncatedSeries {
    check_ki(k, i);
    let (k, i) = (k as i64, i as i64);
    let exponents = (1..)
        .take_while(|m| 2 * k * m - k - i < order)
        .flat_map(|m| [2 * k * m, 2 * k * m - k + i - 1, 2 * k * m - k - i + 1]);
    product_one_minus(exponents, order)
        .div_unit(&euler_infty(order))
        .expect("(q)_inf is a unit")
}

/// The same product rewritten by the triple product identity:
/// `sum_{n>=0} (-1)^n q^{kn^2+n(i-1)} (1 - q^{(k-i+1)(2n+1)}) / (q)_inf`.
pub fn theta_quotient(k: u32, i: u32, order: i64) -> TruncatedSeries {
    check_ki(k, i);
    let (k, i) = (k as i64, i as i64);
    let mut terms = Vec::new();
    for n in (0..).take_while(|n| k * n * n + n * (i - 1) <= order) {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let base = k * n * n + n * (i - 1);
        terms.push((base, BigInt::from(sign)));
        terms.push((base + (k - i + 1) * (2 * n + 1), BigInt::from(-sign)));
    }
    TruncatedSeries::from_terms(terms, order)
        .div_unit(&euler_infty(order))
        .expect("(q)_inf is a unit")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(val: i64, c: &[i64], order: i64) -> TruncatedSeries {
        TruncatedSeries::from_i64s(val, c, order)
    }

    #[test]
    fn add_cancels_and_keeps_laurent_support() {
        let sum = &s(0, &[1, 1], 10) + &s(0, &[1, -1], 10);
        assert_eq!(sum, s(0, &[2], 10));
        assert_eq!(sum.valuation(), 0);

        let z = TruncatedSeries::zero(10);
        let a = s(0, &[3, 0, -2, 7], 10);
        assert_eq!(&z + &a, a);

        let l = &TruncatedSeries::monomial(-1, 1, 5) + &TruncatedSeries::monomial(1, 1, 5);
        assert_eq!(l.valuation(), -1);
        assert_eq!(l.coeff(-1), BigInt::one());
        assert_eq!(l.coeff(0), BigInt::zero());
        assert_eq!(l.coeff(1), BigInt::one());
    }

    #[test]
    fn add_takes_min_order_and_drops_leading_zeros() {
        let a = s(0, &[1, 2, 3], 7);
        let b = s(0, &[-1, 0, 1], 4);
        let c = &a + &b;
        assert_eq!(c.order(), 4);
        assert_eq!(c.valuation(), 1);
    }

    #[test]
    fn mul_examples() {
        let p = &s(0, &[1, 1], 10) * &s(0, &[1, -1], 10);
        assert_eq!(p, s(0, &[1, 0, -1], 10));

        let a = s(0, &[5, -3, 0, 2], 8);
        assert_eq!(&a * &TruncatedSeries::one(8), a);

        let n = 9;
        let geom = s(0, &vec![1; n as usize + 1], n);
        let t = &s(0, &[1, -1], n) * &geom;
        assert_eq!(t, TruncatedSeries::one(n));
        assert_eq!(t.order(), n);
    }

    #[test]
    fn mul_order_rule() {
        let a = s(2, &[1], 10);
        let b = s(0, &[1, 1], 6);
        assert_eq!((&a * &b).order(), 8);
    }

    #[test]
    fn div_unit_examples() {
        let q = s(0, &[1, 0, -1], 12).div_unit(&s(0, &[1, 1], 12)).unwrap();
        assert_eq!(q, s(0, &[1, -1], 12));

        let g = TruncatedSeries::one(8).div_unit(&s(0, &[1, -1], 8)).unwrap();
        assert_eq!(g, s(0, &[1; 9], 8));

        let alt = TruncatedSeries::one(6).div_unit(&s(0, &[1, 1], 6)).unwrap();
        assert_eq!(alt, s(0, &[1, -1, 1, -1, 1, -1, 1], 6));
    }

    #[test]
    fn div_unit_rejects_non_units() {
        let err = TruncatedSeries::one(5).div_unit(&s(0, &[2, 1], 5)).unwrap_err();
        assert_eq!(
            err,
            SeriesError::NotAUnit {
                leading: BigInt::from(2)
            }
        );
        assert!(TruncatedSeries::one(5)
            .div_unit(&TruncatedSeries::zero(5))
            .is_err());
    }

    #[test]
    fn div_unit_by_shifted_unit() {
        // (q^3 + q^4) / (q - q^2) = q^2 (1+q)/(1-q)
        let a = s(3, &[1, 1], 12);
        let b = s(1, &[1, -1], 12);
        let c = a.div_unit(&b).unwrap();
        assert_eq!(c.valuation(), 2);
        assert_eq!(&c * &b, a);
    }

    #[test]
    fn div_qpow_examples() {
        let a = s(2, &[1, 1], 10).div_qpow(2, DivMode::Strict).unwrap();
        assert_eq!(a, s(0, &[1, 1], 8));
        assert_eq!(a.order(), 8);

        let err = s(0, &[1, 1], 10).div_qpow(1, DivMode::Strict).unwrap_err();
        assert_eq!(
            err,
            SeriesError::NotDivisible {
                exponent: 0,
                coefficient: BigInt::one()
            }
        );

        let z = TruncatedSeries::zero(10).div_qpow(4, DivMode::Strict).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.order(), 6);

        let l = s(0, &[1, 1], 10).div_qpow(3, DivMode::Laurent).unwrap();
        assert_eq!(l.valuation(), -3);
    }

    #[test]
    fn div_qpow_strict_needs_enough_order() {
        let err = TruncatedSeries::zero(2).div_qpow(5, DivMode::Strict).unwrap_err();
        assert_eq!(err, SeriesError::InsufficientOrder { needed: 4, order: 2 });
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(1, Sign::Plus, 2, 10), s(0, &[1, -1, -1, 1], 10));
        assert_eq!(pochhammer(1, Sign::Minus, 1, 10), s(0, &[1, 1], 10));
        assert_eq!(pochhammer(1, Sign::Plus, 0, 10), TruncatedSeries::one(10));
    }

    #[test]
    fn euler_product_to_order_seven() {
        assert_eq!(euler_infty(7), s(0, &[1, -1, -1, 0, 0, 1, 0, 1], 7));
        assert_eq!(euler_infty(0), TruncatedSeries::one(0));
    }

    #[test]
    fn euler_product_matches_pentagonal_exponents() {
        // brute-force the generalized pentagonal numbers m(3m-1)/2, m in Z
        let order = 200;
        let mut expected = vec![0i64; order as usize + 1];
        for m in -20i64..=20 {
            let e = m * (3 * m - 1) / 2;
            if e <= order {
                expected[e as usize] += if m % 2 == 0 { 1 } else { -1 };
            }
        }
        let got = euler_infty(order);
        assert_eq!(got, s(0, &expected, order));
        assert!(got.terms().all(|(_, c)| c.abs().is_one()));
    }

    #[test]
    fn product_side_k2_i2_counts_parts_2_mod_4() {
        assert_eq!(product_side(2, 2, 8), s(0, &[1, 0, 1, 0, 1, 0, 2, 0, 2], 8));
    }

    #[test]
    fn theta_quotient_trivial_order() {
        for k in 2..=5 {
            for i in 1..=k {
                assert_eq!(theta_quotient(k, i, 0), TruncatedSeries::one(0));
                assert_eq!(product_side(k, i, 20).coeff(0), BigInt::one());
            }
        }
    }

    #[test]
    fn theta_quotient_k3_i3_matches_product() {
        assert_eq!(theta_quotient(3, 3, 60), product_side(3, 3, 60));
    }

    #[test]
    fn display_renders_signs() {
        assert_eq!(s(0, &[1, -1, 0, 2], 3).to_string(), "1 - q + 2q^3 + O(q^4)");
        assert_eq!(TruncatedSeries::zero(2).to_string(), "0 + O(q^3)");
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(s(0, &[1, -2], 2)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"valuation": 0, "order": 2, "coeffs": ["1", "-2", "0"]})
        );
        let bad = serde_json::json!({"valuation": 0, "order": 2, "coeffs": ["1"]});
        assert!(serde_json::from_value::<TruncatedSeries>(bad).is_err());
    }
}
