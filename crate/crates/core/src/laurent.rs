//! Exact arithmetic in the ring `Z[v, v^-1]`.
//!
//! A [`LaurentPoly`] stores its nonzero terms sorted by exponent, so equal
//! polynomials always have identical representations. Coefficients are
//! arbitrary-precision integers.
//!
//! The textual form is `"v^-2 + 2 - 3*v^4"`: terms in increasing exponent
//! order, joined by `" + "` / `" - "`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer Laurent polynomial in the formal variable `v`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    // Sorted by exponent, no zero coefficients.
    terms: Vec<(i64, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// The monomial `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self {
            terms: vec![(e, BigInt::one())],
        }
    }

    /// The monomial `c * v^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_default() += c.into();
        }
        Self::from_sorted_map(acc)
    }

    fn from_sorted_map(map: BTreeMap<i64, BigInt>) -> Self {
        Self {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + ExactSizeIterator {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// `Some(e)` when `self == v^e`.
    pub fn as_v_pow(&self) -> Option<i64> {
        match self.terms.as_slice() {
            [(e, c)] if c.is_one() => Some(*e),
            _ => None,
        }
    }

    /// `Some((sign, e))` when `self == ±v^e`, i.e. when `self` is a unit.
    pub fn as_unit(&self) -> Option<(i8, i64)> {
        match self.terms.as_slice() {
            [(e, c)] if c.is_one() => Some((1, *e)),
            [(e, c)] if (-c).is_one() => Some((-1, *e)),
            _ => None,
        }
    }

    /// The bar-involution `f(v) -> f(v^-1)`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// `[f]_+`: the sub-sum of terms with strictly positive exponent.
    ///
    /// When `f + bar(f) = 0` this is the unique `p` in `vZ[v]` with
    /// `p - bar(p) = f`.
    pub fn positive_part(&self) -> Self {
        Self {
            terms: self.terms.iter().filter(|(e, _)| *e >= 1).cloned().collect(),
        }
    }

    /// Multiplies every exponent by `k` (the substitution `v := v^k`).
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitution exponent must be nonzero");
        let mut terms: Vec<_> = self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect();
        if k < 0 {
            terms.reverse();
        }
        Self { terms }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// True when every exponent is `>= 1`, i.e. `self` lies in `vZ[v]`.
    pub fn in_v_zv(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 1)
    }

    /// True when every exponent is `>= 0`, i.e. `self` lies in `Z[v]`.
    pub fn in_zv(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    /// True when `self + bar(self) == 0`.
    pub fn is_bar_antisymmetric(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|i| {
            let (e, c) = &self.terms[i];
            let (e2, c2) = &self.terms[n - 1 - i];
            *e == -*e2 && *c == -c2.clone()
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division in `Z[v, v^-1]`; `None` when `rhs` does not divide
    /// `self` (or `rhs` is zero).
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((sign, e)) = rhs.as_unit() {
            let q = self.shift(-e);
            return Some(if sign < 0 { -q } else { q });
        }
        // Long division of polynomials in v after clearing negative exponents,
        // eliminating from the top degree down.
        let num_lo = self.min_exp().unwrap();
        let den_lo = rhs.min_exp().unwrap();
        let den_hi = rhs.max_exp().unwrap();
        let den_lead = rhs.terms.last().unwrap().1.clone();
        let mut rem: BTreeMap<i64, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: BTreeMap<i64, BigInt> = BTreeMap::new();
        while let Some((&top, c)) = rem.iter().next_back() {
            if top - (den_hi - den_lo) < num_lo {
                return None;
            }
            let (q, r) = c.div_rem(&den_lead);
            if !r.is_zero() {
                return None;
            }
            let shift = top - den_hi;
            for (e, dc) in &rhs.terms {
                let slot = rem.entry(e + shift).or_default();
                *slot -= &q * dc;
                if slot.is_zero() {
                    rem.remove(&(e + shift));
                }
            }
            quot.insert(shift, q);
        }
        Some(Self::from_sorted_map(quot))
    }

    fn add_terms(&self, rhs: &Self, negate_rhs: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        let fix = |c: &BigInt| if negate_rhs { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, fix(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_rhs { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(e, c)| (*e, fix(c))));
        Self { terms: out }
    }

    fn mul_terms(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return Self {
                terms: self.terms.iter().map(|(x, d)| (x + e, d * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs.mul_terms(self);
        }
        let lo = self.min_exp().unwrap() + rhs.min_exp().unwrap();
        let hi = self.max_exp().unwrap() + rhs.max_exp().unwrap();
        let width = (hi - lo + 1) as usize;
        if width <= 4096 {
            let mut dense = vec![BigInt::zero(); width];
            for (e1, c1) in &self.terms {
                for (e2, c2) in &rhs.terms {
                    dense[(e1 + e2 - lo) as usize] += c1 * c2;
                }
            }
            Self {
                terms: dense
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (lo + i as i64, c))
                    .collect(),
            }
        } else {
            let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (e1, c1) in &self.terms {
                for (e2, c2) in &rhs.terms {
                    *acc.entry(e1 + e2).or_default() += c1 * c2;
                }
            }
            Self::from_sorted_map(acc)
        }
    }
}

/// The Gaussian binomial `[r choose s]_t`, returned as a polynomial whose
/// variable plays the role of `t`.
///
/// Computed from the defining ratio of products of `(t^j - 1)` by exact
/// division; fails when `s > r`.
pub fn gaussian_binomial(r: u32, s: u32) -> Result<LaurentPoly> {
    if s > r {
        return Err(Error::Precondition(format!(
            "gaussian binomial needs r >= s, got r = {r}, s = {s}"
        )));
    }
    let t_minus_one = |j: u32| LaurentPoly::from_terms([(j as i64, 1), (0, -1)]);
    let num = (r - s + 1..=r).fold(LaurentPoly::one(), |acc, j| &acc * &t_minus_one(j));
    let den = (1..=s).fold(LaurentPoly::one(), |acc, j| &acc * &t_minus_one(j));
    num.div_exact(&den)
        .ok_or_else(|| Error::Precondition("gaussian binomial ratio is not exact".into()))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                let f: fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly = $body;
                f(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_terms(b, false));
forward_binop!(Sub, sub, |a, b| a.add_terms(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_terms(b));

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.add_terms(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.add_terms(rhs, true);
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.mul_terms(rhs);
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: i64, c: &BigInt) -> fmt::Result {
    match (e, c.is_one()) {
        (0, _) => write!(f, "{c}"),
        (1, true) => write!(f, "v"),
        (1, false) => write!(f, "{c}*v"),
        (_, true) => write!(f, "v^{e}"),
        (_, false) => write!(f, "{c}*v^{e}"),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_monomial(f, *e, &abs)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of Laurent polynomial", self.pos))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let Some(d) = self.digits() else {
            return Err(self.err("expected exponent"));
        };
        let e: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        Ok(if neg { -e } else { e })
    }

    fn v_power(&mut self) -> Result<i64> {
        if !self.eat(b'v') {
            return Err(self.err("expected 'v'"));
        }
        if self.eat(b'^') {
            self.exponent()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<(i64, BigInt)> {
        if let Some(d) = self.digits() {
            let c = BigInt::from_str(d).map_err(|_| self.err("bad coefficient"))?;
            if self.eat(b'*') || self.peek() == Some(b'v') {
                Ok((self.v_power()?, c))
            } else {
                Ok((0, c))
            }
        } else {
            Ok((self.v_power()?, BigInt::one()))
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = if cur.eat(b'-') {
                -1
            } else if cur.eat(b'+') || first {
                1
            } else if cur.peek().is_none() {
                break;
            } else {
                return Err(cur.err("expected '+' or '-'"));
            };
            let (e, c) = cur.term()?;
            terms.push((e, c * sign));
            first = false;
            if cur.peek().is_none() {
                break;
            }
        }
        Ok(Self::from_terms(terms))
    }
}

impl serde::Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
