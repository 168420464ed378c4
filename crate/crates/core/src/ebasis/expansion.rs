use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::laurent::LaurentPoly;
use crate::qtorus::LatticeVector;

/// A finite combination `sum_a c_a E_a` of standard monomials. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EExpansion {
    coeffs: BTreeMap<LatticeVector, LaurentPoly>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    a: LatticeVector,
    coeff: LaurentPoly,
}

impl EExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    /// The expansion `{a: 1}`.
    pub fn single(a: LatticeVector) -> Self {
        let mut out = Self::new();
        out.add(a, &LaurentPoly::one());
        out
    }

    pub fn add(&mut self, a: LatticeVector, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(a) {
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

    pub fn get(&self, a: &LatticeVector) -> Option<&LaurentPoly> {
        self.coeffs.get(a)
    }

    pub fn coeff(&self, a: &LatticeVector) -> LaurentPoly {
        self.coeffs.get(a).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticeVector, &LaurentPoly)> {
        self.coeffs.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &LatticeVector> {
        self.coeffs.keys()
    }

    /// Keys whose coefficient is exactly `1`.
    pub fn unit_keys(&self) -> Vec<&LatticeVector> {
        self.coeffs.iter().filter(|(_, c)| c.is_one()).map(|(a, _)| a).collect()
    }

    /// The key of the unique coefficient equal to `1` when every other
    /// coefficient lies in `vZ[v]`.
    pub fn crystal_key(&self) -> Option<&LatticeVector> {
        let units = self.unit_keys();
        let rest_ok = self.coeffs.iter().all(|(_, c)| c.is_one() || c.in_v_zv());
        match units.as_slice() {
            [a] if rest_ok => Some(a),
            _ => None,
        }
    }

    pub fn bar(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c.bar())).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("expansions serialize")
    }

    /// Terms sorted by decreasing `r`-value, then increasing key.
    fn display_order(&self, n: usize) -> Vec<(&LatticeVector, &LaurentPoly)> {
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by(|x, y| y.0.r_value(n).cmp(&x.0.r_value(n)).then_with(|| x.0.cmp(y.0)));
        terms
    }

    /// Text form such as `E(-1,-1) - v^4 E(1,1)`. `n` is the number of
    /// cluster coordinates, used only to order the terms.
    pub fn display(&self, n: usize) -> String {
        if self.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (a, c)) in self.display_order(n).into_iter().enumerate() {
            let (neg, body) = match c.as_unit() {
                Some((s, e)) => (s < 0, if e == 0 { String::new() } else { format!("{} ", LaurentPoly::v_pow(e)) }),
                None if c.num_terms() == 1 => {
                    let text = c.to_string();
                    match text.strip_prefix('-') {
                        Some(rest) => (true, format!("{rest} ")),
                        None => (false, format!("{text} ")),
                    }
                }
                None => (false, format!("({c}) ")),
            };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&format!("{body}E{a}"));
        }
        out
    }
}

impl FromIterator<(LatticeVector, LaurentPoly)> for EExpansion {
    fn from_iter<I: IntoIterator<Item = (LatticeVector, LaurentPoly)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (a, c) in iter {
            out.add(a, &c);
        }
        out
    }
}

impl fmt::Display for EExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.keys().next().map_or(0, LatticeVector::len);
        f.write_str(&self.display(n))
    }
}

impl Serialize for EExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|(a, c)| Record { a: a.clone(), coeff: c.clone() }))
    }
}

impl<'de> Deserialize<'de> for EExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let records = Vec::<Record>::deserialize(d)?;
        Ok(records.into_iter().map(|r| (r.a, r.coeff)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn display_forms() {
        let x: EExpansion =
            [([-1, -1].into(), lp("1")), ([1, 1].into(), lp("-v^4"))].into_iter().collect();
        assert_eq!(x.display(2), "E(-1,-1) - v^4 E(1,1)");
        let y: EExpansion =
            [([1, 1].into(), lp("v^-4 - v^4")), ([0, 0].into(), lp("-1"))].into_iter().collect();
        assert_eq!(y.display(2), "-E(0,0) + (v^-4 - v^4) E(1,1)");
        let z: EExpansion = [([0, 0].into(), lp("3*v^2"))].into_iter().collect();
        assert_eq!(z.display(2), "3*v^2 E(0,0)");
        assert_eq!(EExpansion::new().display(2), "0");
    }

    #[test]
    fn cancellation_and_crystal_key() {
        let mut x = EExpansion::single([0, 1].into());
        x.add([0, 1].into(), &lp("-1"));
        assert!(x.is_empty());
        let y: EExpansion =
            [([1, 0].into(), lp("1")), ([0, 0].into(), lp("v + 2*v^3"))].into_iter().collect();
        assert_eq!(y.crystal_key(), Some(&[1, 0].into()));
        let z: EExpansion =
            [([1, 0].into(), lp("1")), ([0, 0].into(), lp("1"))].into_iter().collect();
        assert_eq!(z.crystal_key(), None);
    }

    #[test]
    fn json_round_trip() {
        let x: EExpansion =
            [([-1, -1].into(), lp("1")), ([1, 1].into(), lp("v^-4 - v^4"))].into_iter().collect();
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"[{"a":[-1,-1],"coeff":"1"},{"a":[1,1],"coeff":"v^-4 - v^4"}]"#);
        assert_eq!(serde_json::from_str::<EExpansion>(&text).unwrap(), x);
    }
}
