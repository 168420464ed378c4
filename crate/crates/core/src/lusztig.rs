//! The triangular basis `{C_a}`: the unique bar-invariant elements with
//! `C_a - E_a` in the `vZ[v]`-span of lower `E`'s.
//!
//! Rows are computed by a worklist over the supports of `r`-rows, processed
//! in decreasing `r`-value. Each candidate `a'` gets
//! `p_{a,a'} = [r_{a,a'} + sum_{a''} bar(p_{a,a''}) r_{a'',a'}]_+`.

use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::ebasis::{EExpansion, MutationFrame, StandardBasis};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::qtorus::{LatticeVector, TorusElement};
use crate::seed::QuantumSeed;

/// One computed row: `C_a = E_a + sum p_{a,a'} E_{a'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRow {
    pub a: LatticeVector,
    /// The off-diagonal coefficients `p_{a,a'}`, `a' != a`.
    pub p: EExpansion,
    pub element: TorusElement,
}

impl CRow {
    /// The full expansion, including the diagonal `a: 1`.
    pub fn expansion(&self) -> EExpansion {
        let mut out = self.p.clone();
        out.add(self.a.clone(), &LaurentPoly::one());
        out
    }
}

/// How candidates with equal `r`-value are ordered. Any choice gives the
/// same result; the option exists to test exactly that.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LexDescending,
    LexAscending,
}

/// Memoized `r`-rows and `C`-rows over one standard basis.
#[derive(Debug)]
pub struct TriangularTable {
    basis: Arc<StandardBasis>,
    r_rows: Mutex<HashMap<LatticeVector, Arc<EExpansion>>>,
    rows: Mutex<HashMap<LatticeVector, Arc<CRow>>>,
}

impl TriangularTable {
    pub fn new(basis: Arc<StandardBasis>) -> Self {
        Self { basis, r_rows: Mutex::default(), rows: Mutex::default() }
    }

    pub fn for_seed(seed: QuantumSeed) -> Result<Self> {
        Ok(Self::new(Arc::new(StandardBasis::new(seed)?)))
    }

    pub fn basis(&self) -> &Arc<StandardBasis> {
        &self.basis
    }

    pub fn r_row(&self, a: &LatticeVector) -> Result<Arc<EExpansion>> {
        if let Some(r) = self.r_rows.lock().expect("table poisoned").get(a) {
            return Ok(r.clone());
        }
        let r = Arc::new(self.basis.r_row(a)?);
        self.r_rows.lock().expect("table poisoned").insert(a.clone(), r.clone());
        Ok(r)
    }

    /// Rows computed so far.
    pub fn rows(&self) -> Vec<Arc<CRow>> {
        self.rows.lock().expect("table poisoned").values().cloned().collect()
    }

    /// Seeds the table with a row loaded from elsewhere; it is trusted as is.
    pub fn insert(&self, row: CRow) {
        self.rows.lock().expect("table poisoned").insert(row.a.clone(), Arc::new(row));
    }

    pub fn cached(&self, a: &LatticeVector) -> Option<Arc<CRow>> {
        self.rows.lock().expect("table poisoned").get(a).cloned()
    }

    /// `C_a`, computed once and memoized.
    pub fn compute(&self, a: &LatticeVector) -> Result<Arc<CRow>> {
        if let Some(row) = self.cached(a) {
            return Ok(row);
        }
        let row = Arc::new(self.compute_with(a, TieBreak::default())?);
        self.rows.lock().expect("table poisoned").insert(a.clone(), row.clone());
        Ok(row)
    }

    /// `C_a` as a torus element.
    pub fn c_element(&self, a: &LatticeVector) -> Result<TorusElement> {
        Ok(self.compute(a)?.element.clone())
    }

    /// Runs the recursion without touching the row memo.
    pub fn compute_with(&self, a: &LatticeVector, tie: TieBreak) -> Result<CRow> {
        let n = self.basis.seed().n();
        let key = |c: &LatticeVector| {
            let k = match tie {
                TieBreak::LexDescending => c.clone(),
                TieBreak::LexAscending => -c,
            };
            (c.r_value(n), k)
        };
        let unkey = |k: LatticeVector| match tie {
            TieBreak::LexDescending => k,
            TieBreak::LexAscending => -k,
        };

        let mut acc: HashMap<LatticeVector, LaurentPoly> = HashMap::new();
        let mut heap = BinaryHeap::new();
        let mut seen = HashSet::new();
        let mut absorb = |coeff: &LaurentPoly,
                          row: &EExpansion,
                          acc: &mut HashMap<LatticeVector, LaurentPoly>,
                          heap: &mut BinaryHeap<(u64, LatticeVector)>| {
            for (c, r) in row.iter() {
                *acc.entry(c.clone()).or_default() += &(coeff * r);
                if seen.insert(c.clone()) {
                    heap.push(key(c));
                }
            }
        };
        absorb(&LaurentPoly::one(), &*self.r_row(a)?, &mut acc, &mut heap);

        let mut p = EExpansion::new();
        while let Some((_, k)) = heap.pop() {
            let c = unkey(k);
            let f = acc.remove(&c).unwrap_or_default();
            if !f.is_bar_antisymmetric() {
                return Err(Error::Recursion(format!(
                    "coefficient {f} at {c} is not bar-antisymmetric"
                )));
            }
            let pc = f.positive_part();
            if pc.is_zero() {
                continue;
            }
            let row = self.r_row(&c)?;
            absorb(&pc.bar(), &row, &mut acc, &mut heap);
            p.add(c, &pc);
        }

        let mut element = self.basis.element(a)?;
        for (c, pc) in p.iter() {
            element = &element + &self.basis.element(c)?.scale(pc);
        }
        Ok(CRow { a: a.clone(), p, element })
    }
}

/// Outcome of [`verify_c_properties`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CReport {
    pub bar_invariant: bool,
    pub coefficients_in_v_zv: bool,
    pub support_below: bool,
    pub element_matches_row: bool,
}

impl CReport {
    pub fn passed(&self) -> bool {
        self.bar_invariant && self.coefficients_in_v_zv && self.support_below && self.element_matches_row
    }
}

/// Checks bar-invariance of the row's element, `p_{a,a'}` in `vZ[v]`,
/// `r(a') < r(a)` on the support, and that the element is the stated
/// combination.
pub fn verify_c_properties(basis: &StandardBasis, row: &CRow) -> Result<CReport> {
    let n = basis.seed().n();
    let assembled = basis.assemble(&row.expansion())?;
    Ok(CReport {
        bar_invariant: assembled.bar() == assembled,
        coefficients_in_v_zv: row.p.iter().all(|(_, c)| c.in_v_zv()),
        support_below: row.p.keys().all(|c| c.r_value(n) < row.a.r_value(n)),
        element_matches_row: assembled == row.element,
    })
}

/// For `a` with nonnegative cluster part, `C_a` must be the monomial `X^a`.
pub fn cluster_monomial_check(table: &TriangularTable, a: &LatticeVector) -> Result<bool> {
    let seed = table.basis().seed();
    if a.cluster_part(seed.n()).iter().any(|x| x < 0) {
        return Err(Error::Precondition(format!("{a} has a negative cluster entry")));
    }
    Ok(table.c_element(a)? == seed.monomial(a.clone()))
}

/// `r_{a,a'} + bar(r_{a,a'}) + sum_{a''} bar(r_{a,a''}) r_{a'',a'} = 0` for
/// every `a'`, which follows from the bar map being an involution.
pub fn verify_r_closure(table: &TriangularTable, a: &LatticeVector) -> Result<bool> {
    let row = table.r_row(a)?;
    let mut total = EExpansion::new();
    for (c, r) in row.iter() {
        total.add(c.clone(), r);
        total.add(c.clone(), &r.bar());
        for (c2, r2) in table.r_row(c)?.iter() {
            total.add(c2.clone(), &(&r.bar() * r2));
        }
    }
    Ok(total.is_empty())
}

/// The bijection for the rank-2 principal seed with parameters `(b, c)`:
/// `(a1, -c[-a1]_+ - a2, a3, a4 + min(c[-a1]_+, [-a2]_+))`.
pub fn phi_rank2_principal(a: &LatticeVector, c: i64) -> LatticeVector {
    let p = |x: i64| x.max(0);
    LatticeVector::from([a[0], -c * p(-a[0]) - a[1], a[2], a[3] + (c * p(-a[0])).min(p(-a[1]))])
}

/// Result of comparing `C'_a` (mutated seed) with `C_{phi(a)}` at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisComparison {
    pub a: LatticeVector,
    /// The key of the unique unit coefficient of `E'_a` in the `E`-basis,
    /// when the other coefficients lie in `vZ[v]`.
    pub phi: Option<LatticeVector>,
    pub equal: bool,
}

/// The two triangular tables and the frame linking them.
#[derive(Debug)]
pub struct BasisPair {
    pub frame: MutationFrame,
    pub initial: TriangularTable,
    pub mutated: TriangularTable,
}

impl BasisPair {
    pub fn new(seed: &QuantumSeed) -> Result<Self> {
        let frame = MutationFrame::new(seed)?;
        let initial = TriangularTable::for_seed(seed.clone())?;
        let mutated = TriangularTable::for_seed(frame.mutated_seed().clone())?;
        Ok(Self { frame, initial, mutated })
    }

    /// `E'_a` in the initial `E`-basis.
    pub fn eprime_expansion(&self, a: &LatticeVector) -> Result<EExpansion> {
        self.initial.basis().expand_in_e(&self.frame.eprime_element(a)?)
    }

    /// `C'_a` written in the initial torus.
    pub fn c_prime(&self, a: &LatticeVector) -> Result<TorusElement> {
        self.frame.assemble(&self.mutated.compute(a)?.expansion())
    }

    pub fn compare(&self, a: &LatticeVector) -> Result<BasisComparison> {
        let phi = self.eprime_expansion(a)?.crystal_key().cloned();
        let equal = match &phi {
            Some(p) => self.c_prime(a)? == self.initial.c_element(p)?,
            None => false,
        };
        Ok(BasisComparison { a: a.clone(), phi, equal })
    }
}

/// Compares the triangular bases of `seed` and of its mutation at the last
/// index of its order, over the given points.
pub fn compare_bases(seed: &QuantumSeed, points: &[LatticeVector]) -> Result<Vec<BasisComparison>> {
    let pair = BasisPair::new(seed)?;
    points.iter().map(|a| pair.compare(a)).collect()
}
