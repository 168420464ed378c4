use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Neg, Sub, SubAssign};
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An element of `Z^m`: a torus exponent or a basis label.
///
/// The derived ordering is lexicographic; it is used both as the map key
/// order and as the tiebreak of [`WeightOrder`](super::WeightOrder).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector(SmallVec<[i64; 8]>);

impl LatticeVector {
    pub fn new(entries: impl IntoIterator<Item = i64>) -> Self {
        Self(entries.into_iter().collect())
    }

    pub fn zeros(m: usize) -> Self {
        Self(SmallVec::from_elem(0, m))
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = Self::zeros(m);
        v.0[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Componentwise `max(c, 0)`.
    pub fn plus_part(&self) -> Self {
        Self(self.0.iter().map(|&c| c.max(0)).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|&c| c * k).collect())
    }

    /// `a^{<= n}`: keep the first `n` (cluster) coordinates, zero the rest.
    pub fn cluster_part(&self, n: usize) -> Self {
        Self(self.0.iter().enumerate().map(|(i, &c)| if i < n { c } else { 0 }).collect())
    }

    /// `a^{> n}`: keep the frozen coordinates, zero the first `n`.
    pub fn frozen_part(&self, n: usize) -> Self {
        Self(self.0.iter().enumerate().map(|(i, &c)| if i < n { 0 } else { c }).collect())
    }

    /// `r(a) = sum_{k < n} max(-a_k, 0)`.
    pub fn r_value(&self, n: usize) -> u64 {
        self.0[..n].iter().map(|&c| (-c).max(0) as u64).sum()
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn split_at(&self, k: usize) -> (Self, Self) {
        (Self(self.0[..k].into()), Self(self.0[k..].into()))
    }

    pub fn check_len(&self, m: usize) -> Result<()> {
        if self.len() == m {
            Ok(())
        } else {
            Err(Error::Dimension { expected: m, got: self.len() })
        }
    }
}

/// `r(a)` over the first `n` coordinates.
pub fn lat_r_of(a: &LatticeVector, n: usize) -> u64 {
    a.r_value(n)
}

/// Componentwise positive part.
pub fn lat_plus_part(a: &LatticeVector) -> LatticeVector {
    a.plus_part()
}

/// Every point of the box `ranges[0] x ranges[1] x ...`, in lexicographic
/// order.
pub fn lattice_box(ranges: &[std::ops::RangeInclusive<i64>]) -> Vec<LatticeVector> {
    let mut out = vec![LatticeVector::new([])];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|p| r.clone().map(move |x| p.concat(&LatticeVector::new([x]))))
            .collect();
    }
    out
}

impl Index<usize> for LatticeVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for LatticeVector {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        &mut self.0[i]
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v.into())
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        Self(v.iter().copied().collect())
    }
}

impl Add<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.len(), rhs.len());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&LatticeVector> for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.len(), rhs.len());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: LatticeVector) -> LatticeVector {
        &self + &rhs
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: LatticeVector) -> LatticeVector {
        &self - &rhs
    }
}

impl AddAssign<&LatticeVector> for LatticeVector {
    fn add_assign(&mut self, rhs: &LatticeVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&LatticeVector> for LatticeVector {
    fn sub_assign(&mut self, rhs: &LatticeVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        -&self
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `1,-2,0`, `(1,-2,0)` or `[1, -2, 0]`.
impl FromStr for LatticeVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if t.trim().is_empty() {
            return Ok(Self::default());
        }
        t.split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad lattice entry {x:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from)
    }
}

impl serde::Serialize for LatticeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for LatticeVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<i64>::deserialize(d).map(Self::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_part() {
        assert_eq!(lat_plus_part(&[-1, 2, -3].into()), [0, 2, 0].into());
        assert_eq!(lat_plus_part(&[0, 0].into()), [0, 0].into());
        let a: LatticeVector = [3, -5].into();
        assert_eq!(&a.plus_part() - &(-&a).plus_part(), a);
    }

    #[test]
    fn r_of() {
        assert_eq!(lat_r_of(&[-1, 2, -3].into(), 3), 4);
        assert_eq!(lat_r_of(&[1, 1].into(), 2), 0);
        assert_eq!(lat_r_of(&[-3, -3].into(), 2), 6);
        assert_eq!(lat_r_of(&[-3, -3, -7].into(), 2), 6);
    }

    #[test]
    fn truncations() {
        let a: LatticeVector = [1, -2, 3, -4].into();
        assert_eq!(a.cluster_part(2), [1, -2, 0, 0].into());
        assert_eq!(a.frozen_part(2), [0, 0, 3, -4].into());
        assert_eq!(&a.cluster_part(2) + &a.frozen_part(2), a);
    }

    #[test]
    fn parse_and_print() {
        let a: LatticeVector = "(-1, 2,0)".parse().unwrap();
        assert_eq!(a, [-1, 2, 0].into());
        assert_eq!(a.to_string(), "(-1,2,0)");
        assert_eq!("[3]".parse::<LatticeVector>().unwrap(), [3].into());
        assert!("1,x".parse::<LatticeVector>().is_err());
    }

    #[test]
    fn boxes() {
        let pts = lattice_box(&[-1..=1, 0..=1]);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], [-1, 0].into());
        assert_eq!(pts[5], [1, 1].into());
        assert_eq!(lattice_box(&[]), vec![LatticeVector::new([])]);
    }
}
