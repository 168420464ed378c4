//! The Kronecker algebra: cluster variables `X_m` for all `m` within a
//! horizon, the element `X_delta`, Chebyshev polynomials in it, and the
//! checks tying them to the triangular basis.

use std::ops::RangeInclusive;

use crate::ebasis::EExpansion;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::lusztig::TriangularTable;
use crate::qtorus::{lattice_box, torus_divide, LatticeVector, Side, TorusElement, DEFAULT_DIVISION_CAP};
use crate::seed::QuantumSeed;

use super::{a11_seed, Report};

/// Default bound on `|m|` for [`Kronecker`].
pub const DEFAULT_HORIZON: i64 = 8;

/// Cluster variables `X_m`, `|m| <= horizon`, of the Kronecker algebra,
/// together with its triangular table.
#[derive(Debug)]
pub struct Kronecker {
    table: TriangularTable,
    horizon: i64,
    vars: Vec<TorusElement>,
}

impl Kronecker {
    pub fn new() -> Result<Self> {
        Self::with_horizon(DEFAULT_HORIZON)
    }

    /// Builds `X_m` for `|m| <= horizon` from `X_{m+1} X_{m-1} = v^2 X_m^2 + 1`,
    /// one exact division per step.
    pub fn with_horizon(horizon: i64) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::Precondition(format!("horizon {horizon} must be at least 2")));
        }
        let seed = a11_seed();
        let ord = seed.weight_order();
        let one = TorusElement::one(seed.form());
        let rhs = |x: &TorusElement| &(x * x).scale_v(2) + &one;
        let width = (2 * horizon + 1) as usize;
        let mut vars: Vec<Option<TorusElement>> = vec![None; width];
        let at = |m: i64| (m + horizon) as usize;
        vars[at(1)] = Some(seed.x(0));
        vars[at(2)] = Some(seed.x(1));
        for m in 3..=horizon {
            let p = rhs(vars[at(m - 1)].as_ref().expect("built"));
            let q = vars[at(m - 2)].as_ref().expect("built");
            vars[at(m)] = Some(torus_divide(&p, q, Side::Right, &ord, DEFAULT_DIVISION_CAP)?);
        }
        for m in (-horizon..=0).rev() {
            let p = rhs(vars[at(m + 1)].as_ref().expect("built"));
            let q = vars[at(m + 2)].as_ref().expect("built");
            vars[at(m)] = Some(torus_divide(&p, q, Side::Left, &ord, DEFAULT_DIVISION_CAP)?);
        }
        Ok(Self {
            table: TriangularTable::for_seed(seed)?,
            horizon,
            vars: vars.into_iter().map(|x| x.expect("every slot filled")).collect(),
        })
    }

    pub fn seed(&self) -> &QuantumSeed {
        self.table.basis().seed()
    }

    pub fn table(&self) -> &TriangularTable {
        &self.table
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    /// `X_m`.
    pub fn var(&self, m: i64) -> Result<&TorusElement> {
        if m.abs() > self.horizon {
            return Err(Error::IndexOutOfRange {
                index: m.unsigned_abs() as usize,
                bound: self.horizon as usize + 1,
            });
        }
        Ok(&self.vars[(m + self.horizon) as usize])
    }

    /// `E_a` of the Kronecker seed.
    pub fn e(&self, a: &LatticeVector) -> Result<TorusElement> {
        self.table.basis().element(a)
    }

    /// `X_delta = v X_3 X_0 - v^3 X_2 X_1`.
    pub fn x_delta(&self) -> Result<TorusElement> {
        let a = (self.var(3)? * self.var(0)?).scale_v(1);
        let b = (self.var(2)? * self.var(1)?).scale_v(3);
        Ok(&a - &b)
    }

    /// `S_r(X_delta)` from `S_{-1} = 0`, `S_0 = 1`, `S_r = z S_{r-1} - S_{r-2}`.
    pub fn chebyshev(&self, r: u32) -> Result<TorusElement> {
        let z = self.x_delta()?;
        let mut prev = TorusElement::zero(z.form());
        let mut cur = TorusElement::one(z.form());
        for _ in 0..r {
            let next = &(&z * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// `v^r X_{r+2} X_0 - v^{r+2} X_{r+1} X_1`.
    pub fn chebyshev_product_form(&self, r: i64) -> Result<TorusElement> {
        let a = (self.var(r + 2)? * self.var(0)?).scale_v(r);
        let b = (self.var(r + 1)? * self.var(1)?).scale_v(r + 2);
        Ok(&a - &b)
    }

    /// The cluster monomial `v^{a1 a2} X_m^{a1} X_{m+1}^{a2}`.
    pub fn cluster_monomial(&self, m: i64, a1: u32, a2: u32) -> Result<TorusElement> {
        let x = self.var(m)?.pow(a1);
        let y = self.var(m + 1)?.pow(a2);
        Ok((&x * &y).scale_v(i64::from(a1) * i64::from(a2)))
    }
}

/// `X_m` of the Kronecker algebra with the default horizon.
pub fn kronecker_cluster_var(m: i64) -> Result<TorusElement> {
    Kronecker::new()?.var(m).cloned()
}

/// The label of `X_m` in the triangular basis: `alpha(1-r) = (1-r, -r)`,
/// `alpha(2+r) = (-r, 1-r)` for `r >= 0`.
pub fn alpha(m: i64) -> LatticeVector {
    if m <= 1 {
        LatticeVector::from([m, m - 1])
    } else {
        LatticeVector::from([2 - m, 3 - m])
    }
}

/// `C_{(-1,-1)} = E_{(-1,-1)} - v^4 E_{(1,1)} = X_delta`, then
/// `C_{(-r,-r)} = S_r(X_delta)` for `r = 1..=r_max`, the product form of
/// `S_r` for `r = 0..=r_max`, and bar-invariance of each `S_r`.
pub fn verify_chebyshev(k: &Kronecker, r_max: u32) -> Report {
    let mut report = Report::new("kronecker chebyshev");
    let xd = match k.x_delta() {
        Ok(x) => x,
        Err(e) => {
            report.check(false, || format!("X_delta: {e}"));
            return report;
        }
    };
    let base: EExpansion = [
        (LatticeVector::from([-1, -1]), LaurentPoly::one()),
        (LatticeVector::from([1, 1]), -LaurentPoly::v_pow(4)),
    ]
    .into_iter()
    .collect();
    match k.table().compute(&LatticeVector::from([-1, -1])) {
        Ok(row) => {
            report.check(row.expansion() == base, || {
                format!("C(-1,-1) = {}, expected {}", row.expansion().display(2), base.display(2))
            });
            report.check(row.element == xd, || format!("C(-1,-1) = {} but X_delta = {xd}", row.element));
        }
        Err(e) => report.check(false, || format!("C(-1,-1): {e}")),
    }
    for r in 0..=r_max {
        let s = match k.chebyshev(r) {
            Ok(s) => s,
            Err(e) => {
                report.check(false, || format!("S_{r}: {e}"));
                continue;
            }
        };
        report.check(s.is_bar_invariant(), || format!("S_{r}(X_delta) is not bar-invariant"));
        report.check_result(k.chebyshev_product_form(i64::from(r)).map(|p| p == s), || {
            format!("product form of S_{r}(X_delta)")
        });
        if r >= 1 {
            let a = LatticeVector::from([-i64::from(r), -i64::from(r)]);
            report.check_result(k.table().c_element(&a).map(|c| c == s), || {
                format!("C{a} differs from S_{r}(X_delta)")
            });
        }
    }
    report
}

/// `C_{a1 alpha(m) + a2 alpha(m+1)} = v^{a1 a2} X_m^{a1} X_{m+1}^{a2}` for
/// `m` in `ms` and `0 <= a_i <= a_max`.
pub fn verify_labeling(k: &Kronecker, ms: RangeInclusive<i64>, a_max: u32) -> Report {
    let mut report = Report::new("kronecker cluster monomial labels");
    for m in ms {
        for a1 in 0..=a_max {
            for a2 in 0..=a_max {
                let label = &alpha(m).scale(i64::from(a1)) + &alpha(m + 1).scale(i64::from(a2));
                let ok = k
                    .cluster_monomial(m, a1, a2)
                    .and_then(|x| Ok(k.table().c_element(&label)? == x));
                report.check_result(ok, || format!("m={m}, a=({a1},{a2}): C{label}"));
            }
        }
    }
    report
}

/// The right-hand side of `v^{-a1} E_a X_0 - E_{(a1, a2-1)}` by cases.
fn lemma_ea_x0_rhs(a1: i64, a2: i64) -> EExpansion {
    let v = LaurentPoly::v_pow;
    let e = |x: i64, y: i64| LatticeVector::from([x, y]);
    let mut out = EExpansion::new();
    if a2 <= 0 {
        return out;
    }
    if a1 >= 0 {
        out.add(e(a1 + 2, a2 - 1), &v(2 * a2));
    } else if a1 == -1 {
        out.add(e(1, a2 - 1), &v(2 * a2));
        out.add(e(1, a2 + 1), &v(2 * (a2 + 2)));
    } else {
        out.add(e(a1 + 2, a2 - 1), &v(2 * a2));
        out.add(e(a1 + 2, a2 + 1), &(v(2 * (a2 - a1 - 1)) + v(2 * (a2 - a1 + 1))));
        out.add(e(a1 + 2, a2 + 3), &v(2 * (a2 - 2 * a1)));
    }
    out
}

/// For every `a` in `[-w, w]^2`, expands `v^{-a1} E_a X_0 - E_{(a1,a2-1)}`
/// and compares with the case formula.
pub fn verify_lemma_ea_x0(k: &Kronecker, w: i64) -> Report {
    let mut report = Report::new("kronecker E_a X_0");
    let basis = k.table().basis();
    for a in lattice_box(&[-w..=w, -w..=w]) {
        let (a1, a2) = (a[0], a[1]);
        let lhs = (|| {
            let x = (&basis.element(&a)? * k.var(0)?).scale_v(-a1);
            let y = basis.element(&LatticeVector::from([a1, a2 - 1]))?;
            basis.expand_in_e(&(&x - &y))
        })();
        let want = lemma_ea_x0_rhs(a1, a2);
        match lhs {
            Ok(got) => report.check(got == want, || {
                format!("a={a}: got {}, expected {}", got.display(2), want.display(2))
            }),
            Err(e) => report.check(false, || format!("a={a}: {e}")),
        }
    }
    report
}

/// `E_a = v^{a1 a2} X_3^{[-a1]_+} X_1^{[a1]_+} X_2^{[a2]_+} X_0^{[-a2]_+}`
/// on `[-w, w]^2`.
pub fn verify_closed_form(k: &Kronecker, w: i64) -> Report {
    let mut report = Report::new("kronecker E_a closed form");
    let p = |x: i64| x.max(0) as u32;
    for a in lattice_box(&[-w..=w, -w..=w]) {
        let (a1, a2) = (a[0], a[1]);
        let ok = (|| {
            let mut x = k.var(3)?.pow(p(-a1));
            for (m, e) in [(1, p(a1)), (2, p(a2)), (0, p(-a2))] {
                x = &x * &k.var(m)?.pow(e);
            }
            Ok(k.e(&a)? == x.scale_v(a1 * a2))
        })();
        report.check_result(ok, || format!("a={a}"));
    }
    report
}

/// The sharper order `[-a'_1]_+ < [-a_1]_+` and `[-a'_2]_+ < [-a_2]_+`
/// bounds the support of every `r`-row and every `p`-row on `[-w, w]^2`.
pub fn verify_sharp_order(k: &Kronecker, w: i64) -> Report {
    let mut report = Report::new("kronecker sharper order");
    let neg = |x: i64| (-x).max(0);
    let below = |c: &LatticeVector, a: &LatticeVector| neg(c[0]) < neg(a[0]) && neg(c[1]) < neg(a[1]);
    for a in lattice_box(&[-w..=w, -w..=w]) {
        match k.table().r_row(&a) {
            Ok(row) => report.check(row.keys().all(|c| below(c, &a)), || format!("r-row of {a}")),
            Err(e) => report.check(false, || format!("r-row of {a}: {e}")),
        }
        match k.table().compute(&a) {
            Ok(row) => report.check(row.p.keys().all(|c| below(c, &a)), || format!("p-row of {a}")),
            Err(e) => report.check(false, || format!("p-row of {a}: {e}")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron() -> Kronecker {
        Kronecker::with_horizon(5).unwrap()
    }

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::new(x.iter().copied())
    }

    #[test]
    fn neighbours_of_the_initial_cluster() {
        let k = kron();
        let s = k.seed().clone();
        let x0 = &s.monomial(lv(&[2, -1])) + &s.monomial(lv(&[0, -1]));
        let x3 = &s.monomial(lv(&[-1, 2])) + &s.monomial(lv(&[-1, 0]));
        assert_eq!(k.var(0).unwrap(), &x0);
        assert_eq!(k.var(3).unwrap(), &x3);
    }

    #[test]
    fn exchange_and_commutation_hold_everywhere() {
        let k = kron();
        let one = TorusElement::one(k.seed().form());
        for m in -4..=4 {
            let xm = k.var(m).unwrap();
            let lhs = k.var(m + 1).unwrap() * k.var(m - 1).unwrap();
            assert_eq!(lhs, &(xm * xm).scale_v(2) + &one, "exchange at {m}");
            let up = k.var(m + 1).unwrap() * xm;
            assert_eq!(up, (xm * k.var(m + 1).unwrap()).scale_v(2), "commutation at {m}");
        }
    }

    #[test]
    fn horizon_is_enforced() {
        let k = kron();
        assert!(matches!(k.var(6), Err(Error::IndexOutOfRange { .. })));
        assert!(Kronecker::with_horizon(1).is_err());
    }

    #[test]
    fn chebyshev_start() {
        let k = kron();
        assert_eq!(k.chebyshev(0).unwrap(), TorusElement::one(k.seed().form()));
        assert_eq!(k.chebyshev(1).unwrap(), k.x_delta().unwrap());
        let xd = k.x_delta().unwrap();
        let two = &(&xd * &xd) - &TorusElement::one(xd.form());
        assert_eq!(k.chebyshev(2).unwrap(), two);
    }

    #[test]
    fn alpha_labels() {
        assert_eq!(alpha(1), lv(&[1, 0]));
        assert_eq!(alpha(2), lv(&[0, 1]));
        assert_eq!(alpha(0), lv(&[0, -1]));
        assert_eq!(alpha(3), lv(&[-1, 0]));
        assert_eq!(alpha(-1), lv(&[-1, -2]));
        assert_eq!(alpha(4), lv(&[-2, -1]));
    }

    #[test]
    fn lemma_cases_by_hand() {
        assert!(lemma_ea_x0_rhs(0, -1).is_empty());
        assert_eq!(lemma_ea_x0_rhs(1, 1).display(2), "v^2 E(3,0)");
        assert_eq!(lemma_ea_x0_rhs(-1, 1).display(2), "v^2 E(1,0) + v^6 E(1,2)");
    }

    #[test]
    fn suites_pass_on_small_windows() {
        let k = kron();
        for r in [
            verify_chebyshev(&k, 2),
            verify_labeling(&k, 0..=2, 1),
            verify_lemma_ea_x0(&k, 2),
            verify_closed_form(&k, 2),
            verify_sharp_order(&k, 2),
        ] {
            assert!(r.ok(), "{r}");
            assert!(r.total() > 0);
        }
    }
}
