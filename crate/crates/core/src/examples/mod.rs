//! Worked examples as executable checks: the Kronecker algebra, rank-2
//! crystal monomials, the principal-coefficient identities and the
//! double/bullet embedding.
//!
//! Every `verify_*` function returns a [`Report`] counting passed and
//! failed checks and keeping the first failure.

mod crystal;
mod embedding;
mod identities;
mod kronecker;

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::seed::QuantumSeed;

pub use crystal::{crystal_box, nu_explicit, verify_crystal_identities, CrystalFamily, CrystalMonomialIndex, Reduction, Rule};
pub use embedding::{
    psi, psi_prime, verify_c_conditions, verify_frozen_shift, verify_order_transposition,
    verify_psi_embedding, Embedding,
};
pub use identities::{verify_generator_relations, verify_principal_identities};
pub use kronecker::{
    alpha, kronecker_cluster_var, verify_closed_form, verify_labeling, verify_lemma_ea_x0,
    verify_chebyshev, verify_sharp_order, Kronecker, DEFAULT_HORIZON,
};

/// The Kronecker seed: `B = [[0,-2],[2,0]]`, `Lambda = [[0,-1],[1,0]]`,
/// `d = (2,2)`.
pub fn a11_seed() -> QuantumSeed {
    QuantumSeed::new(vec![vec![0, -2], vec![2, 0]], vec![vec![0, -1], vec![1, 0]], vec![2, 2], None)
        .expect("the Kronecker seed is valid")
}

/// The rank-2 principal seed `B = [[0,-b],[c,0]]`, `d = (c,b)`, natural
/// order.
pub fn rank2_principal(b: i64, c: i64) -> Result<QuantumSeed> {
    QuantumSeed::principal(&[vec![0, -b], vec![c, 0]], &[c, b])?.with_order(vec![0, 1])
}

/// Pass/fail tally of one verification suite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    /// Records one check. `describe` runs only for the first failure.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    /// Like [`check`](Self::check), counting an error as a failure.
    pub fn check_result(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, describe),
            Err(e) => self.check(false, || format!("{}: {e}", describe())),
        }
    }

    /// Adds another report's counts, keeping the earliest failure.
    pub fn absorb(&mut self, other: Report) {
        self.passed += other.passed;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure.map(|f| format!("[{}] {f}", other.name));
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} passed, {} failed", self.name, self.passed, self.failed)?;
        if let Some(first) = &self.first_failure {
            write!(f, "\n  first failure: {first}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn report_keeps_first_failure() {
        let mut r = Report::new("demo");
        r.check(true, || unreachable!());
        r.check(false, || "one".into());
        r.check(false, || "two".into());
        r.check_result(Err(Error::ZeroElement), || "three".into());
        assert_eq!((r.passed, r.failed), (1, 3));
        assert_eq!(r.first_failure.as_deref(), Some("one"));
        assert!(r.to_string().starts_with("FAIL demo: 1 passed, 3 failed"));
    }

    #[test]
    fn absorb_tags_source() {
        let mut outer = Report::new("all");
        let mut inner = Report::new("inner");
        inner.check(false, || "bad".into());
        outer.absorb(inner);
        assert_eq!(outer.first_failure.as_deref(), Some("[inner] bad"));
        assert!(!outer.ok());
    }

    #[test]
    fn seeds_are_valid() {
        assert!(a11_seed().is_order_compatible());
        let s = rank2_principal(2, 1).unwrap();
        assert_eq!(s.order(), &[0, 1]);
        assert_eq!(s.lambda(2, 3), 2);
    }
}
