//! The principal seed inside the double of a seed, the maps `psi`, `psi'`
//! matching standard monomials across that embedding, and structural checks
//! on the expansion of `E'_a` in the `E`-basis.

use crate::ebasis::{MutationFrame, StandardBasis};
use crate::error::{Error, Result};
use crate::lusztig::{phi_rank2_principal, BasisPair, TriangularTable};
use crate::qtorus::{LatticeVector, TorusElement};
use crate::seed::QuantumSeed;

use super::{rank2_principal, Report};

fn pos(x: &LatticeVector) -> LatticeVector {
    x.plus_part()
}

/// `psi(a)` in `Z^{2m}` for `a` in `Z^{2n}`, linear on the frozen part and
/// on each orthant of the cluster part:
///
/// * `psi(e_k) = (e_k, e_k)`;
/// * `psi(-e_k) = (-e_k - [-b_k]_+^{>n}, -e_k + [-b_k]_+^{<=n})`;
/// * `psi(e_{n+k}) = (b_k^{>n}, -b_k^{<=n})`.
pub fn psi(seed: &QuantumSeed, a: &LatticeVector) -> Result<LatticeVector> {
    let n = seed.n();
    a.check_len(2 * n)?;
    let mut out = frozen_image(seed, a);
    for k in 0..n {
        let ek = seed.unit(k);
        let img = if a[k] >= 0 {
            ek.concat(&ek)
        } else {
            let neg = pos(&-&seed.column(k));
            (-&ek - neg.frozen_part(n)).concat(&(&-&ek + &neg.cluster_part(n)))
        };
        out += &img.scale(a[k].abs());
    }
    Ok(out)
}

/// `psi'(a)`, the counterpart of [`psi`] for the mutated seeds, with `k`
/// the last index of the order:
///
/// * `psi'(e_j) = (e_j, e_j)` for `j != k`;
/// * `psi'(e_k) = (e_k - [-b_k]_+^{>n}, -e_k - b_k^{<=n})`;
/// * `psi'(-e_j) = (-e_j - [-b'_j]_+^{>n} - b_kj [-b_k]_+^{>n},
///   -e_j + [-b_j]_+^{<=n} - b_kj b_k^{<=n} - b_kj e_k)` for `j != k`;
/// * `psi'(-e_k) = (-e_k, e_k)`;
/// * `psi'(e_{n+j}) = psi(e_{n+j})`.
pub fn psi_prime(seed: &QuantumSeed, a: &LatticeVector) -> Result<LatticeVector> {
    let n = seed.n();
    a.check_len(2 * n)?;
    seed.require_order_compatible()?;
    let k = *seed.order().last().ok_or_else(|| Error::Precondition("empty order".into()))?;
    let mutated = seed.mutate(k)?;
    let bk = seed.column(k);
    let ek = seed.unit(k);
    let mut out = frozen_image(seed, a);
    for j in 0..n {
        let ej = seed.unit(j);
        let img = match (a[j] >= 0, j == k) {
            (true, false) => ej.concat(&ej),
            (true, true) => {
                (&ej - &pos(&-&bk).frozen_part(n)).concat(&(-&ej - bk.cluster_part(n)))
            }
            (false, true) => (-&ej).concat(&ej),
            (false, false) => {
                let bkj = seed.b(k, j);
                let first = -&ej
                    - pos(&-&mutated.column(j)).frozen_part(n)
                    - pos(&-&bk).frozen_part(n).scale(bkj);
                let second = -&ej + pos(&-&seed.column(j)).cluster_part(n)
                    - bk.cluster_part(n).scale(bkj)
                    - ek.scale(bkj);
                first.concat(&second)
            }
        };
        out += &img.scale(a[j].abs());
    }
    Ok(out)
}

fn frozen_image(seed: &QuantumSeed, a: &LatticeVector) -> LatticeVector {
    let n = seed.n();
    let zero = LatticeVector::zeros(seed.m());
    let mut out = LatticeVector::zeros(2 * seed.m());
    for j in 0..n {
        let bj = seed.column(j);
        let img = bj.frozen_part(n).concat(&(&zero - &bj.cluster_part(n)));
        out += &img.scale(a[n + j]);
    }
    out
}

/// A seed with its double, the principal seed of its exchange matrix, and
/// the standard monomials of all four (initial and mutated) contexts.
#[derive(Debug)]
pub struct Embedding {
    seed: QuantumSeed,
    bullet_exponents: Vec<LatticeVector>,
    double: StandardBasis,
    bullet: StandardBasis,
    double_frame: MutationFrame,
    bullet_frame: MutationFrame,
}

impl Embedding {
    pub fn new(seed: &QuantumSeed) -> Result<Self> {
        seed.require_order_compatible()?;
        let n = seed.n();
        let b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed.b(i, j)).collect()).collect();
        let bullet = QuantumSeed::principal(&b, seed.d())?.with_order(seed.order().to_vec())?;
        let double = seed.double()?;
        let bullet_exponents = seed.bullet_exponents();
        if double.form().pullback(&bullet_exponents) != **bullet.form() {
            return Err(Error::InvalidSeed("principal form is not the pullback of the double form".into()));
        }
        Ok(Self {
            seed: seed.clone(),
            bullet_exponents,
            double_frame: MutationFrame::new(&double)?,
            bullet_frame: MutationFrame::new(&bullet)?,
            double: StandardBasis::new(double)?,
            bullet: StandardBasis::new(bullet)?,
        })
    }

    pub fn seed(&self) -> &QuantumSeed {
        &self.seed
    }

    /// Reads an element of the principal torus inside the double torus.
    pub fn embed(&self, x: &TorusElement) -> Result<TorusElement> {
        let target = self.double.seed().form();
        x.map_exponents(target, |e| {
            let mut out = LatticeVector::zeros(target.dim());
            for (i, g) in self.bullet_exponents.iter().enumerate() {
                out += &g.scale(e[i]);
            }
            out
        })
    }

    /// `E^bullet_a = E^(2)_{psi(a)}`.
    pub fn check_psi(&self, a: &LatticeVector) -> Result<bool> {
        let lhs = self.embed(&self.bullet.element(a)?)?;
        Ok(lhs == self.double.element(&psi(&self.seed, a)?)?)
    }

    /// `E'^bullet_a = E'^(2)_{psi'(a)}`.
    pub fn check_psi_prime(&self, a: &LatticeVector) -> Result<bool> {
        let lhs = self.embed(&self.bullet_frame.eprime_element(a)?)?;
        Ok(lhs == self.double_frame.eprime_element(&psi_prime(&self.seed, a)?)?)
    }
}

/// For each sample `a` in `Z^{2n}`: `psi(a)` and `psi'(a)` restrict to `a`
/// on the first `n` coordinates, and the standard monomials of the
/// principal seed and its mutation equal those of the double at `psi(a)`,
/// `psi'(a)`.
pub fn verify_psi_embedding(seed: &QuantumSeed, samples: &[LatticeVector]) -> Report {
    let mut report = Report::new("principal-in-double embedding");
    let emb = match Embedding::new(seed) {
        Ok(e) => e,
        Err(e) => {
            report.check(false, || e.to_string());
            return report;
        }
    };
    let n = seed.n();
    for a in samples {
        for (name, map) in [("psi", psi as fn(&QuantumSeed, &LatticeVector) -> Result<LatticeVector>), ("psi'", psi_prime)] {
            report.check_result(map(seed, a).map(|p| p.entries()[..n] == a.entries()[..n]), || {
                format!("{name}({a}) changes the cluster part")
            });
        }
        report.check_result(emb.check_psi(a), || format!("E at {a}"));
        report.check_result(emb.check_psi_prime(a), || format!("E' at {a}"));
    }
    report
}

/// `E'_a` of the rank-2 principal seed has exactly one unit coefficient in
/// the `E`-basis, at `phi(a)`, and all others in `vZ[v]`, for
/// `a` in `[-w, w]^2 x {0}^2`.
pub fn verify_c_conditions(b: i64, c: i64, w: i64) -> Report {
    let mut report = Report::new(format!("mutated monomials (b={b}, c={c})"));
    let pair = match rank2_principal(b, c).and_then(|s| BasisPair::new(&s)) {
        Ok(p) => p,
        Err(e) => {
            report.check(false, || e.to_string());
            return report;
        }
    };
    for a in crate::qtorus::lattice_box(&[-w..=w, -w..=w, 0..=0, 0..=0]) {
        let want = phi_rank2_principal(&a, c);
        match pair.eprime_expansion(&a) {
            Ok(x) => report.check(x.crystal_key() == Some(&want), || {
                format!("E'{a} = {}, expected unit at {want}", x.display(2))
            }),
            Err(e) => report.check(false, || format!("E'{a}: {e}")),
        }
    }
    report
}

/// Expansion coefficients of `E'_a` shift with frozen translations:
/// `c^{a'+a0}_{a+a0} = c^{a'}_a` whenever `a0` vanishes on cluster
/// coordinates.
pub fn verify_frozen_shift(pair: &BasisPair, samples: &[(LatticeVector, LatticeVector)]) -> Report {
    let mut report = Report::new("frozen shift");
    let n = pair.initial.basis().seed().n();
    for (a, a0) in samples {
        if !a0.cluster_part(n).is_zero() {
            report.check(false, || format!("shift {a0} touches cluster coordinates"));
            continue;
        }
        let ok = (|| {
            let base = pair.eprime_expansion(a)?;
            let moved = pair.eprime_expansion(&(a + a0))?;
            let shifted: crate::ebasis::EExpansion = base.iter().map(|(k, c)| (k + a0, c.clone())).collect();
            Ok(shifted == moved)
        })();
        report.check_result(ok, || format!("a={a}, a0={a0}"));
    }
    report
}

/// Swapping two neighbours `j, k` of the order with `b_jk = 0` leaves every
/// sampled `E_a` unchanged, and `C_a` for samples with `r(a) <= c_max_r`.
pub fn verify_order_transposition(seed: &QuantumSeed, samples: &[LatticeVector], c_max_r: u64) -> Report {
    let mut report = Report::new("order transposition");
    let n = seed.n();
    let base = match TriangularTable::for_seed(seed.clone()) {
        Ok(t) => t,
        Err(e) => {
            report.check(false, || e.to_string());
            return report;
        }
    };
    let order = seed.order().to_vec();
    for p in 0..order.len().saturating_sub(1) {
        let (j, k) = (order[p], order[p + 1]);
        if seed.b(j, k) != 0 {
            continue;
        }
        let mut swapped = order.clone();
        swapped.swap(p, p + 1);
        let other = match seed.with_order(swapped).and_then(TriangularTable::for_seed) {
            Ok(t) => t,
            Err(e) => {
                report.check(false, || format!("swap {},{}: {e}", j + 1, k + 1));
                continue;
            }
        };
        for a in samples {
            let ok = (|| Ok(base.basis().element(a)? == other.basis().element(a)?))();
            report.check_result(ok, || format!("E{a} after swapping {},{}", j + 1, k + 1));
            if a.r_value(n) <= c_max_r {
                let ok = (|| Ok(base.c_element(a)? == other.c_element(a)?))();
                report.check_result(ok, || format!("C{a} after swapping {},{}", j + 1, k + 1));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::a11_seed;
    use crate::qtorus::lattice_box;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::new(x.iter().copied())
    }

    #[test]
    fn psi_on_generators() {
        let s = a11_seed();
        // no frozen rows: b_k^{>n} = 0
        assert_eq!(psi(&s, &lv(&[1, 0, 0, 0])).unwrap(), lv(&[1, 0, 1, 0]));
        assert_eq!(psi(&s, &lv(&[0, 0, 1, 0])).unwrap(), lv(&[0, 0, 0, -2]));
        assert_eq!(psi(&s, &lv(&[0, 0, 0, 1])).unwrap(), lv(&[0, 0, 2, 0]));
        assert_eq!(psi_prime(&s, &lv(&[0, -1, 0, 0])).unwrap(), lv(&[0, -1, 0, 1]));
        assert!(psi(&s, &lv(&[1, 0])).is_err());
    }

    #[test]
    fn psi_embedding_kronecker_and_principal() {
        let pts = lattice_box(&[-1..=1, -1..=1, -1..=1, -1..=1]);
        let r = verify_psi_embedding(&a11_seed(), &pts);
        assert!(r.ok(), "{r}");
        let s = rank2_principal(2, 1).unwrap();
        let pts: Vec<_> = lattice_box(&[-1..=1, -1..=1, 0..=1, -1..=0]);
        let r = verify_psi_embedding(&s, &pts);
        assert!(r.ok(), "{r}");
    }

    #[test]
    fn c_conditions_small() {
        for (b, c) in [(1, 1), (2, 1), (1, 2)] {
            let r = verify_c_conditions(b, c, 1);
            assert!(r.ok(), "{r}");
            assert_eq!(r.total(), 9);
        }
    }

    #[test]
    fn frozen_shift_and_bad_shift() {
        let pair = BasisPair::new(&rank2_principal(1, 1).unwrap()).unwrap();
        let samples = vec![(lv(&[-1, 1, 0, 0]), lv(&[0, 0, 1, -2])), (lv(&[-1, -1, 1, 0]), lv(&[0, 0, -1, 1]))];
        assert!(verify_frozen_shift(&pair, &samples).ok());
        let bad = vec![(lv(&[0, 0, 0, 0]), lv(&[1, 0, 0, 0]))];
        assert!(!verify_frozen_shift(&pair, &bad).ok());
    }

    #[test]
    fn transposition_with_disconnected_vertices() {
        let s = QuantumSeed::principal(&[vec![0, 0], vec![0, 0]], &[1, 2]).unwrap();
        let pts = lattice_box(&[-1..=1, -1..=1, 0..=0, -1..=0]);
        let r = verify_order_transposition(&s, &pts, 2);
        assert!(r.ok(), "{r}");
        assert!(r.total() > 0);
    }
}
