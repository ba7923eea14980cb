//! Finite abelian groups `Z/n1 x ... x Z/nd` with elements stored as
//! mixed-radix indices.
//!
//! Index encoding is row-major in the literal factor order: the last factor
//! is the fastest-varying digit, so in `Z/4xZ/6` the element `(3,5)` has
//! index `3*6 + 5 = 23`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the group order. Every quantity allocates O(order) arrays.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 24;

/// Environment variable that overrides [`DEFAULT_MAX_ORDER`].
pub const MAX_ORDER_ENV: &str = "ADDCOMB_MAX_ORDER";

/// Reads the group-order cap from `ADDCOMB_MAX_ORDER`, falling back to the default.
pub fn max_order_from_env() -> Result<u64> {
    match std::env::var(MAX_ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| Error::Parse(format!("{MAX_ORDER_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

#[derive(Debug)]
struct Inner {
    factors: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

/// A finite abelian group given as an ordered product of cyclic factors.
///
/// Cloning is cheap; equality compares the factor lists.
#[derive(Clone)]
pub struct GroupSpec(Arc<Inner>);

/// A group element, identified by its canonical mixed-radix index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(usize);

impl Element {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Eq for GroupSpec {}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = &self.0.factors;
        let mut first = true;
        let mut i = 0;
        while i < factors.len() {
            if !first {
                f.write_str("x")?;
            }
            first = false;
            if factors[i] == 2 {
                let run = factors[i..].iter().take_while(|&&n| n == 2).count();
                if run > 1 {
                    write!(f, "F2^{run}")?;
                } else {
                    f.write_str("Z/2")?;
                }
                i += run;
            } else {
                write!(f, "Z/{}", factors[i])?;
                i += 1;
            }
        }
        Ok(())
    }
}

impl GroupSpec {
    /// Parses a group spec with the default order cap.
    ///
    /// Grammar: `spec := term ("x" term)*`, `term := "Z/" int | "F2^" int`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, DEFAULT_MAX_ORDER)
    }

    pub fn parse_with_cap(text: &str, max_order: u64) -> Result<Self> {
        let syntax = |reason: &str| Error::GroupSpecSyntax {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(syntax("empty"));
        }
        let mut factors = Vec::new();
        for term in text.split('x') {
            if let Some(n) = term.strip_prefix("Z/") {
                factors.push(parse_uint(n).ok_or_else(|| syntax("expected integer after Z/"))?);
            } else if let Some(k) = term.strip_prefix("F2^") {
                let k = parse_uint(k).ok_or_else(|| syntax("expected integer after F2^"))?;
                if k == 0 {
                    return Err(syntax("F2^0 is the trivial group"));
                }
                if k > 64 {
                    return Err(Error::OrderTooLarge { order: u128::MAX, max: max_order });
                }
                factors.extend(std::iter::repeat_n(2, k as usize));
            } else {
                return Err(syntax(&format!("unexpected term {term:?}")));
            }
        }
        Self::from_factors(factors, max_order)
    }

    /// Builds a group from explicit cyclic moduli.
    pub fn from_factors(factors: Vec<u64>, max_order: u64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("group needs at least one cyclic factor".into()));
        }
        let mut order: u128 = 1;
        for &n in &factors {
            if n < 2 {
                return Err(Error::ModulusTooSmall(n));
            }
            order = order.saturating_mul(n as u128);
        }
        if order > max_order as u128 {
            return Err(Error::OrderTooLarge { order, max: max_order });
        }
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        Ok(GroupSpec(Arc::new(Inner {
            factors,
            strides,
            order: order as usize,
        })))
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::from_factors(vec![n], DEFAULT_MAX_ORDER)
    }

    pub fn factors(&self) -> &[u64] {
        &self.0.factors
    }

    pub fn rank(&self) -> usize {
        self.0.factors.len()
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.factors.len() == 1
    }

    pub fn identity(&self) -> Element {
        Element(0)
    }

    pub fn element(&self, index: u64) -> Result<Element> {
        if index < self.0.order as u64 {
            Ok(Element(index as usize))
        } else {
            Err(Error::ElementOutOfRange {
                index,
                order: self.0.order as u64,
            })
        }
    }

    /// Iterates over all elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.0.order).map(Element)
    }

    fn check(&self, a: Element) -> Result<()> {
        if a.0 < self.0.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                index: a.0 as u64,
                order: self.0.order as u64,
            })
        }
    }

    /// Encodes coordinates `(c1, ..., cd)` with `0 <= ci < ni`.
    pub fn encode(&self, coords: &[u64]) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let mut index = 0usize;
        for ((&c, &n), &s) in coords.iter().zip(&self.0.factors).zip(&self.0.strides) {
            if c >= n {
                return Err(Error::InvalidArgument(format!("coordinate {c} out of range for Z/{n}")));
            }
            index += c as usize * s;
        }
        Ok(Element(index))
    }

    pub fn decode(&self, a: Element) -> Vec<u64> {
        self.0
            .factors
            .iter()
            .zip(&self.0.strides)
            .map(|(&n, &s)| ((a.0 / s) as u64) % n)
            .collect()
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(self.add_idx(a.0, b.0)))
    }

    pub fn sub(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(Element(self.sub_idx(a.0, b.0)))
    }

    pub fn neg(&self, a: Element) -> Result<Element> {
        self.check(a)?;
        Ok(Element(self.neg_idx(a.0)))
    }

    /// `n * a` for any integer `n`; negative `n` negates.
    pub fn scalar_mul(&self, n: i64, a: Element) -> Result<Element> {
        self.check(a)?;
        Ok(Element(self.scalar_mul_idx(n, a.0)))
    }

    /// Smallest `t >= 1` with `t * a = 0`.
    pub fn additive_order(&self, a: Element) -> Result<u64> {
        self.check(a)?;
        Ok(self.additive_order_idx(a.0))
    }

    // Unchecked index arithmetic for hot loops; callers guarantee range.

    #[inline]
    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        let inner = &*self.0;
        if inner.factors.len() == 1 {
            let s = a + b;
            return if s >= inner.order { s - inner.order } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for (&n, &stride) in inner.factors.iter().zip(&inner.strides).rev() {
            let n = n as usize;
            let (da, db) = (a % n, b % n);
            a /= n;
            b /= n;
            let s = da + db;
            out += if s >= n { s - n } else { s } * stride;
        }
        out
    }

    #[inline]
    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        let inner = &*self.0;
        if inner.factors.len() == 1 {
            return if a == 0 { 0 } else { inner.order - a };
        }
        let mut a = a;
        let mut out = 0;
        for (&n, &stride) in inner.factors.iter().zip(&inner.strides).rev() {
            let n = n as usize;
            let d = a % n;
            a /= n;
            out += if d == 0 { 0 } else { n - d } * stride;
        }
        out
    }

    #[inline]
    pub(crate) fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub(crate) fn scalar_mul_idx(&self, n: i64, a: usize) -> usize {
        let base = if n < 0 { self.neg_idx(a) } else { a };
        let mut k = n.unsigned_abs();
        // double-and-add
        let mut acc = 0usize;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_idx(acc, pow);
            }
            pow = self.add_idx(pow, pow);
            k >>= 1;
        }
        acc
    }

    pub(crate) fn additive_order_idx(&self, a: usize) -> u64 {
        let mut t = 1u64;
        let mut x = a;
        while x != 0 {
            x = self.add_idx(x, a);
            t += 1;
        }
        t
    }
}

fn parse_uint(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
