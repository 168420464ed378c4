//! Quantum seeds: validation, mutation, acyclicity and compatible linear
//! orders, plus the principal and double constructions.
//!
//! Indices are 0-based throughout the library. The first `n` coordinates of
//! `Z^m` are the mutable (cluster) directions; the remaining `m - n` are
//! frozen.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtorus::{LatticeVector, SkewForm, TorusElement, WeightOrder};

/// The data `(B~, Lambda, d, order)` of a quantum seed.
///
/// `b_tilde` is `m x n` (row-major, columns are the exchange vectors `b_k`),
/// `order` lists the cluster indices in increasing order for the linear order
/// used by the standard monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantumSeed {
    m: usize,
    n: usize,
    b_tilde: Vec<Vec<i64>>,
    form: Arc<SkewForm>,
    d: Vec<i64>,
    order: Vec<usize>,
}

/// A problem found by [`QuantumSeed::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `Lambda(b_j, e_i) != delta_ij d_j`.
    Compatibility { i: usize, j: usize, found: i64, expected: i64 },
    /// `lambda_ij != -lambda_ji`.
    SkewSymmetry { i: usize, j: usize },
    /// `d_j b_jk != -d_k b_kj`.
    Symmetrizability { j: usize, k: usize },
    NonPositiveSymmetrizer { j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based for humans
        match *self {
            Violation::Compatibility { i, j, found, expected } => write!(
                f,
                "compatibility fails at (i={}, j={}): Lambda(b_j, e_i) = {found}, expected {expected}",
                i + 1,
                j + 1
            ),
            Violation::SkewSymmetry { i, j } => {
                write!(f, "Lambda not skew-symmetric at ({}, {})", i + 1, j + 1)
            }
            Violation::Symmetrizability { j, k } => {
                write!(f, "d_j b_jk != -d_k b_kj at (j={}, k={})", j + 1, k + 1)
            }
            Violation::NonPositiveSymmetrizer { j } => write!(f, "d_{} is not positive", j + 1),
        }
    }
}

/// Outcome of [`QuantumSeed::validate`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Position of a vertex in the exchange graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Sink,
    Source,
    Neither,
}

/// Sink/source status of a vertex, read in `Gamma(B)` (exchange part only)
/// and in the graph that also has the frozen rows of `B~` as vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SinkSourceReport {
    pub exchange: VertexKind,
    pub extended: VertexKind,
}

/// Seed file layout. Matrices are row-major, `order` is 1-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedFile {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub order: Vec<usize>,
    /// Weight vector of the term order used for expansion and division.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
}

impl QuantumSeed {
    /// Builds a seed and checks shapes plus the compatibility and
    /// skew-symmetry invariants. `order` defaults to `0, 1, ..., n-1`.
    pub fn new(
        b_tilde: Vec<Vec<i64>>,
        lambda: Vec<Vec<i64>>,
        d: Vec<i64>,
        order: Option<Vec<usize>>,
    ) -> Result<Self> {
        let seed = Self::new_unchecked(b_tilde, lambda, d, order)?;
        let report = seed.validate();
        if !report.is_valid() {
            let msgs: Vec<_> = report.violations.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidSeed(msgs.join("; ")));
        }
        Ok(seed)
    }

    /// Shape checks only; use [`validate`](Self::validate) for the rest.
    pub fn new_unchecked(
        b_tilde: Vec<Vec<i64>>,
        lambda: Vec<Vec<i64>>,
        d: Vec<i64>,
        order: Option<Vec<usize>>,
    ) -> Result<Self> {
        let m = b_tilde.len();
        let n = d.len();
        if n > m {
            return Err(Error::InvalidSeed(format!("n = {n} exceeds m = {m}")));
        }
        if let Some(row) = b_tilde.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, got: row.len() });
        }
        if lambda.len() != m {
            return Err(Error::Dimension { expected: m, got: lambda.len() });
        }
        let form = SkewForm::from_rows_unchecked(&lambda)?;
        let order = order.unwrap_or_else(|| (0..n).collect());
        let mut seen = vec![false; n];
        for &k in &order {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidSeed(format!("order {order:?} is not a permutation")));
            }
        }
        if order.len() != n {
            return Err(Error::InvalidSeed(format!("order {order:?} is not a permutation")));
        }
        Ok(Self { m, n, b_tilde, form: Arc::new(form), d, order })
    }

    pub fn from_file(file: &SeedFile) -> Result<Self> {
        let seed = Self::from_file_unchecked(file)?;
        Self::new(seed.b_tilde, seed.form.rows(), seed.d, Some(seed.order))
    }

    /// Like [`from_file`](Self::from_file) but with shape checks only.
    pub fn from_file_unchecked(file: &SeedFile) -> Result<Self> {
        if file.b.len() != file.m || file.d.len() != file.n {
            return Err(Error::InvalidSeed(format!(
                "declared m = {}, n = {} do not match B ({} rows) and d ({} entries)",
                file.m,
                file.n,
                file.b.len(),
                file.d.len()
            )));
        }
        let order = file
            .order
            .iter()
            .map(|&k| {
                k.checked_sub(1)
                    .ok_or_else(|| Error::InvalidSeed("order entries are 1-based".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new_unchecked(file.b.clone(), file.lambda.clone(), file.d.clone(), Some(order))
    }

    pub fn to_file(&self) -> SeedFile {
        SeedFile {
            m: self.m,
            n: self.n,
            b: self.b_tilde.clone(),
            lambda: self.form.rows(),
            d: self.d.clone(),
            order: self.order.iter().map(|k| k + 1).collect(),
            weight: Some(self.weight_order().weight().entries().to_vec()),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b_tilde[i][j]
    }

    pub fn b_tilde(&self) -> &[Vec<i64>] {
        &self.b_tilde
    }

    /// Column `b_k` of `B~`.
    pub fn column(&self, k: usize) -> LatticeVector {
        LatticeVector::new(self.b_tilde.iter().map(|row| row[k]))
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn lambda(&self, i: usize, j: usize) -> i64 {
        self.form.entry(i, j)
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Same data with a different linear order (not validated against `B`).
    pub fn with_order(&self, order: Vec<usize>) -> Result<Self> {
        Self::new_unchecked(self.b_tilde.clone(), self.form.rows(), self.d.clone(), Some(order))
    }

    pub fn unit(&self, i: usize) -> LatticeVector {
        LatticeVector::unit(self.m, i)
    }

    /// The generator `X_i` of the seed's torus.
    pub fn x(&self, i: usize) -> TorusElement {
        TorusElement::monomial(&self.form, self.unit(i))
    }

    pub fn monomial(&self, e: LatticeVector) -> TorusElement {
        TorusElement::monomial(&self.form, e)
    }

    pub(crate) fn check_cluster_index(&self, k: usize) -> Result<()> {
        if k < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: k, bound: self.n })
        }
    }

    /// Lists every violated invariant.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, j) in self.form.skew_violations() {
            violations.push(Violation::SkewSymmetry { i, j });
        }
        for (j, &dj) in self.d.iter().enumerate() {
            if dj <= 0 {
                violations.push(Violation::NonPositiveSymmetrizer { j });
            }
        }
        for j in 0..self.n {
            let bj = self.column(j);
            for i in 0..self.m {
                let found = self.form.eval(&bj, &self.unit(i));
                let expected = if i == j { self.d[j] } else { 0 };
                if found != expected {
                    violations.push(Violation::Compatibility { i, j, found, expected });
                }
            }
        }
        for j in 0..self.n {
            for k in j + 1..self.n {
                if self.d[j] * self.b(j, k) != -self.d[k] * self.b(k, j) {
                    violations.push(Violation::Symmetrizability { j, k });
                }
            }
        }
        ValidationReport { violations }
    }

    /// True when `Gamma(B)` (edge `j -> i` iff `b_ij > 0`) has no oriented
    /// cycle.
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Some linear order with `b_ij <= 0` whenever `i` precedes `j`.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        // Repeatedly take a vertex with no incoming edge among the rest.
        let mut remaining: Vec<usize> = (0..self.n).collect();
        let mut out = Vec::with_capacity(self.n);
        while !remaining.is_empty() {
            let pos = remaining
                .iter()
                .position(|&k| remaining.iter().all(|&j| self.b(k, j) <= 0))?;
            out.push(remaining.remove(pos));
        }
        Some(out)
    }

    /// True when `order` satisfies `b_ij <= 0` for all `i` before `j`.
    pub fn order_is_compatible(&self, order: &[usize]) -> bool {
        order
            .iter()
            .enumerate()
            .all(|(p, &i)| order[p + 1..].iter().all(|&j| self.b(i, j) <= 0))
    }

    pub fn is_order_compatible(&self) -> bool {
        self.order_is_compatible(&self.order)
    }

    pub(crate) fn require_order_compatible(&self) -> Result<()> {
        if self.is_order_compatible() {
            Ok(())
        } else {
            Err(Error::IncompatibleOrder(format!("{:?}", self.order)))
        }
    }

    /// Every linear order satisfying the sign condition, in lexicographic
    /// order.
    pub fn compatible_orders(&self) -> Vec<Vec<usize>> {
        fn extend(seed: &QuantumSeed, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if prefix.len() == seed.n {
                out.push(prefix.clone());
                return;
            }
            for k in 0..seed.n {
                if used[k] || prefix.iter().any(|&i| seed.b(i, k) > 0) {
                    continue;
                }
                used[k] = true;
                prefix.push(k);
                extend(seed, prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
        let mut out = Vec::new();
        extend(self, &mut Vec::new(), &mut vec![false; self.n], &mut out);
        out
    }

    /// Sink/source status of `k`. A vertex with no edges at all is reported
    /// as a source.
    pub fn sink_or_source(&self, k: usize) -> Result<SinkSourceReport> {
        self.check_cluster_index(k)?;
        let classify = |rows: usize| {
            // outgoing k -> i iff b_ik > 0; incoming i -> k iff b_ik < 0
            let out = (0..rows).any(|i| self.b(i, k) > 0);
            let inc = (0..rows).any(|i| self.b(i, k) < 0);
            match (out, inc) {
                (_, false) => VertexKind::Source,
                (false, true) => VertexKind::Sink,
                (true, true) => VertexKind::Neither,
            }
        };
        Ok(SinkSourceReport { exchange: classify(self.n), extended: classify(self.m) })
    }

    /// `e'_k = -e_k + [b_k]_+`.
    pub fn e_prime_vec(&self, k: usize) -> Result<LatticeVector> {
        self.check_cluster_index(k)?;
        Ok(&self.column(k).plus_part() - &self.unit(k))
    }

    /// Seed mutation in direction `k`. The order of the result is kept; use
    /// [`with_order`](Self::with_order) to pick a compatible one.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.check_cluster_index(k)?;
        let pos = |x: i64| x.max(0);
        let mut b = self.b_tilde.clone();
        for i in 0..self.m {
            for j in 0..self.n {
                b[i][j] = if i == k || j == k {
                    -self.b(i, j)
                } else {
                    self.b(i, j) + pos(self.b(i, k)) * pos(self.b(k, j))
                        - pos(-self.b(i, k)) * pos(-self.b(k, j))
                };
            }
        }
        // Lambda' = E^T Lambda E where E replaces column k of the identity by e'_k.
        let mut cols: Vec<_> = (0..self.m).map(|i| self.unit(i)).collect();
        cols[k] = self.e_prime_vec(k)?;
        let lambda = self.form.pullback(&cols).rows();
        Self::new(b, lambda, self.d.clone(), Some(self.order.clone()))
    }

    /// The weight order used for expansion and division.
    ///
    /// `w . x = sum_{j < n} Lambda(x, e_j)`; compatibility gives
    /// `w . b_k = d_k > 0` for every exchange column.
    pub fn weight_order(&self) -> WeightOrder {
        let w = LatticeVector::new((0..self.m).map(|i| (0..self.n).map(|j| self.lambda(i, j)).sum()));
        WeightOrder::new(w)
    }

    /// The principal quantization `B~ = [B; I]`,
    /// `Lambda = [[0, -D], [D, -DB]]`.
    pub fn principal(b: &[Vec<i64>], d: &[i64]) -> Result<Self> {
        let n = d.len();
        if b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, got: b.len() });
        }
        for j in 0..n {
            for k in 0..n {
                if d[j] * b[j][k] != -d[k] * b[k][j] {
                    return Err(Error::InvalidSeed(format!(
                        "DB is not skew-symmetric at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        let m = 2 * n;
        let mut b_tilde = b.to_vec();
        for i in 0..n {
            b_tilde.push((0..n).map(|j| i64::from(i == j)).collect());
        }
        let mut lambda = vec![vec![0; m]; m];
        for i in 0..n {
            lambda[i][n + i] = -d[i];
            lambda[n + i][i] = d[i];
            for j in 0..n {
                lambda[n + i][n + j] = -d[i] * b[i][j];
            }
        }
        let order = Self::new_unchecked(b_tilde.clone(), lambda.clone(), d.to_vec(), None)?
            .topological_order()
            .unwrap_or_else(|| (0..n).collect());
        Self::new(b_tilde, lambda, d.to_vec(), Some(order))
    }

    /// The double seed: `B~2 = [B~; 0]`, `Lambda2((e,e'),(f,f')) =
    /// Lambda(e,f) - Lambda(e',f')`, same `d` and order.
    pub fn double(&self) -> Result<Self> {
        let mut b = self.b_tilde.clone();
        b.extend(std::iter::repeat(vec![0; self.n]).take(self.m));
        let lambda = self.form.block_sum(&self.form, -1).rows();
        Self::new(b, lambda, self.d.clone(), Some(self.order.clone()))
    }

    /// Exponent vectors of the principal generators inside the double torus:
    /// `(e_j, e_j)` and `(b_j^{>n}, -b_j^{<=n})`.
    pub fn bullet_exponents(&self) -> Vec<LatticeVector> {
        let zero = LatticeVector::zeros(self.m);
        let mut out: Vec<_> = (0..self.n).map(|j| self.unit(j).concat(&self.unit(j))).collect();
        for j in 0..self.n {
            let bj = self.column(j);
            out.push(bj.frozen_part(self.n).concat(&(&zero - &bj.cluster_part(self.n))));
        }
        out
    }

    /// The `2n` bullet generators as elements of the double torus.
    pub fn bullet_generators(&self) -> Result<Vec<TorusElement>> {
        let double = self.double()?;
        Ok(self.bullet_exponents().into_iter().map(|e| double.monomial(e)).collect())
    }
}

/// A random valid principal seed with an acyclic exchange matrix compatible
/// with the natural order: `b_ij <= 0` for `i < j`, entries bounded by
/// `max_entry`, symmetrizers in `1..=max_d`.
pub fn random_principal_seed<R: Rng>(rng: &mut R, n: usize, max_entry: i64, max_d: i64) -> QuantumSeed {
    loop {
        let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_d)).collect();
        let mut b = vec![vec![0; n]; n];
        let mut ok = true;
        for i in 0..n {
            for j in i + 1..n {
                let bij = -rng.gen_range(0..=max_entry);
                let num = -d[i] * bij;
                if num % d[j] != 0 || (num / d[j]).abs() > max_entry {
                    ok = false;
                }
                b[i][j] = bij;
                b[j][i] = num / d[j];
            }
        }
        if ok {
            let seed = QuantumSeed::principal(&b, &d).expect("constructed to be skew-symmetrizable");
            return seed.with_order((0..n).collect()).expect("natural order is a permutation");
        }
    }
}
