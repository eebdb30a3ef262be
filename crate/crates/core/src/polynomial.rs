//! Exact arithmetic in `Z[t]` with overflow detection.
//!
//! Coefficients are `i64`; every arithmetic path is checked, and the
//! operator impls panic on overflow instead of wrapping. Code that must
//! survive hostile input uses the `checked_*` methods.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("integer overflow in polynomial arithmetic")]
    Overflow,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial in `t` with integer coefficients, in canonical form
/// (no trailing zero coefficients; zero is the empty list).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// Coefficients in ascending degree; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `Σ counts[i] t^i`, e.g. a Poincaré polynomial from Betti numbers.
    pub fn from_counts(counts: &[usize]) -> Result<Self, PolyError> {
        counts
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| PolyError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading_coeff(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn degree_and_leading(&self) -> (Degree, i64) {
        (self.degree(), self.leading_coeff())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| {
                self.coeff(i)
                    .checked_add(other.coeff(i))
                    .ok_or(PolyError::Overflow)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }

    pub fn checked_neg(&self) -> Result<Self, PolyError> {
        self.coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(PolyError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(PolyError::Overflow)?;
                out[i + j] = out[i + j].checked_add(term).ok_or(PolyError::Overflow)?;
            }
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, PolyError> {
        self.checked_mul(&Self::constant(k))
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: i64) -> Result<i64, PolyError> {
        self.coeffs.iter().rev().try_fold(0i64, |acc, &c| {
            acc.checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .ok_or(PolyError::Overflow)
        })
    }

    /// All coefficients are non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

pub fn add(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    p.checked_add(q)
}

pub fn mul(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    p.checked_mul(q)
}

pub fn eval(p: &IntPolynomial, x: i64) -> Result<i64, PolyError> {
    p.eval(x)
}

pub fn degree_and_leading(p: &IntPolynomial) -> (Degree, i64) {
    p.degree_and_leading()
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.checked_add(rhs).expect("polynomial overflow")
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.checked_sub(rhs).expect("polynomial overflow")
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        self.checked_mul(rhs).expect("polynomial overflow")
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.checked_neg().expect("polynomial overflow")
    }
}

impl std::iter::Sum for IntPolynomial {
    fn sum<I: Iterator<Item = IntPolynomial>>(iter: I) -> Self {
        iter.fold(IntPolynomial::zero(), |acc, p| &acc + &p)
    }
}

impl PartialOrd for IntPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree, then coefficients from the top down.
impl Ord for IntPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Renders in ascending degree with explicit signs, e.g. `4 - t + 3*t^2`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let magnitude = c.unsigned_abs();
            match (first, c < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match (k, magnitude) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("t")?,
                (1, m) => write!(f, "{m}*t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, m) => write!(f, "{m}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Parses sums of terms `c`, `t`, `t^k`, `ct`, `c*t`, `c*t^k` in any order.
impl FromStr for IntPolynomial {
    type Err = PolyError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| PolyError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let tokens: Vec<&str> = input.split_whitespace().collect();
        let glued = |a: &str, b: &str| {
            let end = a.chars().last().unwrap();
            let start = b.chars().next().unwrap();
            (end.is_ascii_alphanumeric() || end == '^') && (start.is_ascii_alphanumeric())
        };
        if tokens.windows(2).any(|w| glued(w[0], w[1])) {
            return Err(fail("missing operator between terms"));
        }
        let chars: Vec<char> = tokens.concat().chars().collect();
        if chars.is_empty() {
            return Err(fail("empty input"));
        }
        let mut pos = 0;
        let mut acc = IntPolynomial::zero();
        let read_number = |pos: &mut usize| -> Option<u64> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return None;
            }
            chars[start..*pos].iter().collect::<String>().parse().ok()
        };
        while pos < chars.len() {
            let mut negative = false;
            let mut saw_sign = false;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                if saw_sign {
                    return Err(fail("repeated sign"));
                }
                negative = chars[pos] == '-';
                saw_sign = true;
                pos += 1;
            }
            if pos > 0 && !saw_sign {
                return Err(fail("missing operator between terms"));
            }
            let coeff = read_number(&mut pos);
            let mut exponent = 0usize;
            let has_t = if pos < chars.len() && chars[pos] == '*' {
                if coeff.is_none() {
                    return Err(fail("'*' without a coefficient"));
                }
                pos += 1;
                if pos >= chars.len() || chars[pos] != 't' {
                    return Err(fail("expected 't' after '*'"));
                }
                true
            } else {
                pos < chars.len() && chars[pos] == 't'
            };
            if has_t {
                pos += 1;
                exponent = 1;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let e = read_number(&mut pos).ok_or_else(|| fail("expected exponent"))?;
                    exponent = usize::try_from(e).map_err(|_| fail("exponent too large"))?;
                    if exponent > 4096 {
                        return Err(fail("exponent too large"));
                    }
                }
            } else if coeff.is_none() {
                return Err(fail("expected a term"));
            }
            let magnitude =
                i64::try_from(coeff.unwrap_or(1)).map_err(|_| fail("coefficient overflows i64"))?;
            let c = if negative { -magnitude } else { magnitude };
            acc = acc
                .checked_add(&IntPolynomial::monomial(c, exponent))
                .map_err(|_| fail("coefficient overflows i64"))?;
        }
        Ok(acc)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
