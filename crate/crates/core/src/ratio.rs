//! Exact rationals, the extended threshold `T`, and their JSON encoding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `T` in `[1, inf]`, the size floor `|X| >= |A|/T` of the constrained maxima.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(Rational),
    Infinite,
}

impl Threshold {
    pub fn finite(r: Rational) -> Result<Self> {
        if r < Rational::one() {
            return Err(Error::InvalidArgument(format!("T must be at least 1, got {r}")));
        }
        Ok(Threshold::Finite(r))
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::finite(int(n))
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "infinity" | "∞" => Ok(Threshold::Infinite),
            t => Self::finite(parse_rational(t)?),
        }
    }

    /// Whether a part of size `part` meets the floor `part >= whole / T`.
    pub fn admits(&self, part: usize, whole: usize) -> bool {
        match self {
            Threshold::Infinite => true,
            Threshold::Finite(t) => int(part as u64) * t >= int(whole as u64),
        }
    }

    /// Smallest admissible size.
    pub fn min_size(&self, whole: usize) -> usize {
        (0..=whole).find(|&k| self.admits(k, whole)).unwrap_or(whole)
    }

    /// `R * T` for a rational `R >= 1`.
    pub fn scaled(&self, r: &Rational) -> Threshold {
        match self {
            Threshold::Infinite => Threshold::Infinite,
            Threshold::Finite(t) => Threshold::Finite(t * r),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Threshold::Infinite)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Infinite => f.write_str("inf"),
            Threshold::Finite(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Infinite => s.serialize_str("inf"),
            Threshold::Finite(r) => RationalJson(r).serialize(s),
        }
    }
}

/// A quantity value: exact rational or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    Finite(Rational),
    Infinite,
}

impl QValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            QValue::Finite(r) => Some(r),
            QValue::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            QValue::Finite(r) => to_f64(r),
            QValue::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for QValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (QValue::Finite(a), QValue::Finite(b)) => a.cmp(b),
            (QValue::Finite(_), QValue::Infinite) => Ordering::Less,
            (QValue::Infinite, QValue::Finite(_)) => Ordering::Greater,
            (QValue::Infinite, QValue::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Finite(r) => write!(f, "{r}"),
            QValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for QValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QValue::Infinite => s.serialize_str("inf"),
            QValue::Finite(r) => RationalJson(r).serialize(s),
        }
    }
}

fn json_int(n: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

/// Serializes a rational as `{"num": .., "den": ..}` with arbitrary-width integers.
pub struct RationalJson<'a>(pub &'a Rational);

impl Serialize for RationalJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &json_int(self.0.numer()))?;
        st.serialize_field("den", &json_int(self.0.denom()))?;
        st.end()
    }
}

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson(r).serialize(s)
}

pub fn serialize_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => RationalJson(r).serialize(s),
        None => s.serialize_none(),
    }
}

/// Compares `a/b` with `c/d` for positive denominators without overflow.
pub(crate) fn cmp_frac(a: u128, b: u128, c: u128, d: u128) -> Ordering {
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => (BigInt::from(a) * BigInt::from(d)).cmp(&(BigInt::from(c) * BigInt::from(b))),
    }
}

/// `ceil(sqrt(n))` for a nonnegative integer.
pub(crate) fn ceil_sqrt(n: &BigInt) -> BigInt {
    if n.is_negative() || n.is_zero() {
        return BigInt::zero();
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}
