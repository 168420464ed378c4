use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

use super::{LatticeVector, SkewForm};

/// An element of the based quantum torus `T(Lambda)`: a finite
/// `Z[v, v^-1]`-combination of monomials `X^e`.
///
/// Multiplication follows `X^e X^f = v^{Lambda(e, f)} X^{e + f}`. Elements
/// built over different forms cannot be combined; the checked operations
/// report [`Error::ContextMismatch`] and the operator impls panic.
#[derive(Clone)]
pub struct TorusElement {
    form: Arc<SkewForm>,
    terms: BTreeMap<LatticeVector, LaurentPoly>,
}

impl TorusElement {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        Self { form: form.clone(), terms: BTreeMap::new() }
    }

    pub fn one(form: &Arc<SkewForm>) -> Self {
        Self::monomial(form, LatticeVector::zeros(form.dim()))
    }

    /// The basis monomial `X^e`.
    pub fn monomial(form: &Arc<SkewForm>, e: LatticeVector) -> Self {
        Self::term(form, e, LaurentPoly::one())
    }

    /// `c X^e`.
    pub fn term(form: &Arc<SkewForm>, e: LatticeVector, c: LaurentPoly) -> Self {
        assert_eq!(e.len(), form.dim(), "exponent length does not match the torus rank");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { form: form.clone(), terms }
    }

    pub fn from_terms(
        form: &Arc<SkewForm>,
        terms: impl IntoIterator<Item = (LatticeVector, LaurentPoly)>,
    ) -> Result<Self> {
        let mut out = Self::zero(form);
        for (e, c) in terms {
            e.check_len(form.dim())?;
            out.add_term(e, &c);
        }
        Ok(out)
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &LatticeVector) -> LaurentPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// `Some((e, c))` when the element is the single term `c X^e`.
    pub fn as_single_term(&self) -> Option<(&LatticeVector, &LaurentPoly)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.form, &other.form) || *self.form == *other.form
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub(crate) fn add_term(&mut self, e: LatticeVector, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    /// The twisted product, extended bilinearly from the monomial rule.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let mut out = Self::zero(&self.form);
        // Lambda(e, f) = e . (Lambda f); precompute Lambda f once per right term.
        let right: Vec<_> = other
            .terms
            .iter()
            .map(|(f, c)| (f, c, self.form.apply(f)))
            .collect();
        for (e, c1) in &self.terms {
            for (f, c2, lam_f) in &right {
                let twist = e.dot(lam_f);
                let coeff = (c1 * *c2).shift(twist);
                out.add_term(e + f, &coeff);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(&self.form);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    /// Multiplies by `v^k`.
    pub fn scale_v(&self, k: i64) -> Self {
        Self {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.shift(k))).collect(),
        }
    }

    /// The bar-involution: coefficients conjugated, monomials fixed. It is
    /// anti-multiplicative: `bar(xy) = bar(y) bar(x)`.
    pub fn bar(&self) -> Self {
        Self {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.bar())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.bar() == *c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.form);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Re-reads every monomial through a linear map of exponent lattices,
    /// landing over `target`. The map is an algebra homomorphism exactly when
    /// it pulls the target form back to this element's form.
    pub fn map_exponents(
        &self,
        target: &Arc<SkewForm>,
        map: impl Fn(&LatticeVector) -> LatticeVector,
    ) -> Result<Self> {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let img = map(e);
            img.check_len(target.dim())?;
            out.add_term(img, c);
        }
        Ok(out)
    }
}

/// True iff `x y = v^{2t} y x` exactly.
pub fn verify_quasi_commute(x: &TorusElement, y: &TorusElement, t: i64) -> Result<bool> {
    let xy = x.checked_mul(y)?;
    let yx = y.checked_mul(x)?;
    Ok(xy == yx.scale_v(2 * t))
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for TorusElement {}

macro_rules! element_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&TorusElement> for &TorusElement {
            type Output = TorusElement;
            fn $method(self, rhs: &TorusElement) -> TorusElement {
                self.$checked(rhs).expect("torus elements over different skew forms")
            }
        }
        impl $tr<TorusElement> for TorusElement {
            type Output = TorusElement;
            fn $method(self, rhs: TorusElement) -> TorusElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&TorusElement> for TorusElement {
            type Output = TorusElement;
            fn $method(self, rhs: &TorusElement) -> TorusElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<TorusElement> for &TorusElement {
            type Output = TorusElement;
            fn $method(self, rhs: TorusElement) -> TorusElement {
                self.$method(&rhs)
            }
        }
    };
}

element_binop!(Add, add, checked_add);
element_binop!(Sub, sub, checked_sub);
element_binop!(Mul, mul, checked_mul);

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        self.scale(&LaurentPoly::constant(-1))
    }
}

impl Neg for TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        -&self
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "X^{e}")?;
            } else {
                write!(f, "({c}) X^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement[{self}]")
    }
}
