use crate::error::{Error, Result};

use super::LatticeVector;

/// A skew-symmetric integer bilinear form on `Z^m`, stored as its matrix
/// `lambda_ij = Lambda(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewForm {
    m: usize,
    entries: Vec<i64>,
}

impl SkewForm {
    /// Checks that `rows` is square and skew-symmetric.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let form = Self::from_rows_unchecked(rows)?;
        if let Some((i, j)) = form.skew_violations().first() {
            return Err(Error::InvalidSeed(format!(
                "Lambda is not skew-symmetric at ({}, {})",
                i + 1,
                j + 1
            )));
        }
        Ok(form)
    }

    /// Only checks the shape; [`skew_violations`](Self::skew_violations)
    /// reports what is wrong with the entries.
    pub fn from_rows_unchecked(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::Dimension { expected: m, got: bad.len() });
        }
        Ok(Self {
            m,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn zero(m: usize) -> Self {
        Self { m, entries: vec![0; m * m] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.m.max(1)).take(self.m).map(<[i64]>::to_vec).collect()
    }

    /// Pairs `(i, j)` with `i <= j` where `lambda_ij != -lambda_ji`.
    pub fn skew_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in i..self.m {
                if self.entry(i, j) != -self.entry(j, i) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// `Lambda f` as a plain vector, so that `Lambda(e, f) = e . (Lambda f)`.
    pub fn apply(&self, f: &LatticeVector) -> LatticeVector {
        LatticeVector::new((0..self.m).map(|i| {
            let row = &self.entries[i * self.m..(i + 1) * self.m];
            row.iter().zip(f.iter()).map(|(a, b)| a * b).sum()
        }))
    }

    /// `Lambda(e, f) = e^T Lambda f`.
    pub fn eval(&self, e: &LatticeVector, f: &LatticeVector) -> i64 {
        let mut total = 0;
        for i in 0..self.m {
            if e[i] == 0 {
                continue;
            }
            let row = &self.entries[i * self.m..(i + 1) * self.m];
            total += e[i] * row.iter().zip(f.iter()).map(|(a, b)| a * b).sum::<i64>();
        }
        total
    }

    /// `M^T Lambda M`, where the columns of `M` are `cols`.
    pub fn pullback(&self, cols: &[LatticeVector]) -> Self {
        let k = cols.len();
        let mut entries = Vec::with_capacity(k * k);
        for a in cols {
            for b in cols {
                entries.push(self.eval(a, b));
            }
        }
        Self { m: k, entries }
    }

    /// The form `Lambda(e, f) + sign * other(e', f')` on `Z^{m + m'}`.
    pub fn block_sum(&self, other: &Self, sign: i64) -> Self {
        let m = self.m + other.m;
        let mut entries = vec![0; m * m];
        for i in 0..self.m {
            for j in 0..self.m {
                entries[i * m + j] = self.entry(i, j);
            }
        }
        for i in 0..other.m {
            for j in 0..other.m {
                entries[(self.m + i) * m + self.m + j] = sign * other.entry(i, j);
            }
        }
        Self { m, entries }
    }
}
