use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

use super::{LatticeVector, TorusElement};

/// Default number of elimination steps before division gives up.
pub const DEFAULT_DIVISION_CAP: usize = 1_000_000;

/// A total group order on `Z^m`: compare `w . e` first, then
/// lexicographically. Because it is translation invariant, the leading term
/// of a product is the product of leading terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightOrder {
    weight: LatticeVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Solve `q r = p`.
    Left,
    /// Solve `r q = p`.
    Right,
}

impl WeightOrder {
    pub fn new(weight: LatticeVector) -> Self {
        Self { weight }
    }

    pub fn weight(&self) -> &LatticeVector {
        &self.weight
    }

    pub fn cmp(&self, e: &LatticeVector, f: &LatticeVector) -> Ordering {
        self.weight.dot(e).cmp(&self.weight.dot(f)).then_with(|| e.cmp(f))
    }

    fn extreme<'a>(
        &self,
        x: &'a TorusElement,
        want: Ordering,
    ) -> Result<(&'a LatticeVector, &'a LaurentPoly)> {
        let mut best: Option<(&LatticeVector, &LaurentPoly, i64)> = None;
        for (e, c) in x.terms() {
            let we = self.weight.dot(e);
            let better = match best {
                None => true,
                Some((b, _, wb)) => we.cmp(&wb).then_with(|| e.cmp(b)) == want,
            };
            if better {
                best = Some((e, c, we));
            }
        }
        best.map(|(e, c, _)| (e, c)).ok_or(Error::ZeroElement)
    }

    /// The term maximizing `w . e`, ties broken lexicographically.
    pub fn leading<'a>(&self, x: &'a TorusElement) -> Result<(&'a LatticeVector, &'a LaurentPoly)> {
        self.extreme(x, Ordering::Greater)
    }

    pub fn trailing<'a>(&self, x: &'a TorusElement) -> Result<(&'a LatticeVector, &'a LaurentPoly)> {
        self.extreme(x, Ordering::Less)
    }
}

/// Owned version of [`WeightOrder::leading`].
pub fn leading_monomial(x: &TorusElement, ord: &WeightOrder) -> Result<(LatticeVector, LaurentPoly)> {
    ord.leading(x).map(|(e, c)| (e.clone(), c.clone()))
}

/// Exact division in the torus by greedy leading-term elimination.
///
/// Returns `r` with `q r = p` ([`Side::Left`]) or `r q = p`
/// ([`Side::Right`]). Each step cancels the leading term of the running
/// remainder against the leading term of `q`. If a quotient exponent ever
/// drops below `trail(p) - trail(q)` no exact quotient exists; otherwise the
/// loop stops after `cap` steps.
pub fn torus_divide(
    p: &TorusElement,
    q: &TorusElement,
    side: Side,
    ord: &WeightOrder,
    cap: usize,
) -> Result<TorusElement> {
    if !p.same_context(q) {
        return Err(Error::ContextMismatch);
    }
    let (q_lead, q_coeff) = leading_monomial(q, ord)?;
    if p.is_zero() {
        return Ok(TorusElement::zero(p.form()));
    }
    let form = p.form().clone();
    let floor = {
        let (p_tail, _) = ord.trailing(p)?;
        let (q_tail, _) = ord.trailing(q)?;
        p_tail - q_tail
    };
    let mut rem = p.clone();
    let mut quot = TorusElement::zero(&form);
    let mut steps = 0;
    while !rem.is_zero() {
        if steps >= cap {
            return Err(Error::NotDivisible { steps });
        }
        steps += 1;
        let (g, c) = leading_monomial(&rem, ord)?;
        let t = &g - &q_lead;
        if ord.cmp(&t, &floor) == Ordering::Less {
            return Err(Error::NotDivisible { steps });
        }
        let twist = match side {
            Side::Left => form.eval(&q_lead, &t),
            Side::Right => form.eval(&t, &q_lead),
        };
        let kappa = c
            .div_exact(&q_coeff.shift(twist))
            .ok_or(Error::NotDivisible { steps })?;
        let step = TorusElement::term(&form, t, kappa);
        let sub = match side {
            Side::Left => q * &step,
            Side::Right => &step * q,
        };
        rem = &rem - &sub;
        quot = &quot + &step;
    }
    Ok(quot)
}
