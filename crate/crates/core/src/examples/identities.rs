//! Relations among the generators `X_k`, `X'_k` of an acyclic seed, and the
//! exchange-type identities of principal seeds used by the crystal
//! arguments in higher rank.

use crate::ebasis::{gaussian_binomial_in, x_prime, MutationFrame};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::qtorus::{LatticeVector, TorusElement};
use crate::seed::QuantumSeed;

use super::Report;

/// For every exchange index `k`:
///
/// * `X_i X'_k = v^{2 Lambda(e_i, e'_k)} X'_k X_i` for `i != k`;
/// * `v^{-Lambda(e'_k,e_k)} X'_k X_k - v^{Lambda(e'_k,e_k)} X_k X'_k
///   = (v^{-d_k} - v^{d_k}) X^{[-b_k]_+}`;
/// * for `j != k`, with `eps` the sign of `b_jk`,
///   `v^{-Lambda(e'_j,e'_k)} X'_j X'_k - v^{Lambda(e'_j,e'_k)} X'_k X'_j
///   = (v^{-d_j b_jk} - v^{d_j b_jk}) X^{-e_j - e_k + [-eps b_j]_+ + [eps b_k]_+}`.
pub fn verify_generator_relations(seed: &QuantumSeed) -> Report {
    let mut report = Report::new("generator relations");
    if let Err(e) = generator_relations(seed, &mut report) {
        report.check(false, || e.to_string());
    }
    report
}

fn generator_relations(seed: &QuantumSeed, report: &mut Report) -> Result<()> {
    let (m, n) = (seed.m(), seed.n());
    let form = seed.form();
    let xp: Vec<TorusElement> = (0..n).map(|k| x_prime(seed, k)).collect::<Result<_>>()?;
    let ep: Vec<LatticeVector> = (0..n).map(|k| seed.e_prime_vec(k)).collect::<Result<_>>()?;
    let v = LaurentPoly::v_pow;
    for k in 0..n {
        for i in (0..m).filter(|&i| i != k) {
            let t = form.eval(&seed.unit(i), &ep[k]);
            let ok = &seed.x(i) * &xp[k] == (&xp[k] * &seed.x(i)).scale_v(2 * t);
            report.check(ok, || format!("X_{} X'_{} quasi-commutation", i + 1, k + 1));
        }

        let t = form.eval(&ep[k], &seed.unit(k));
        let lhs = &(&xp[k] * &seed.x(k)).scale_v(-t) - &(&seed.x(k) * &xp[k]).scale_v(t);
        let dk = seed.d()[k];
        let rhs = seed.monomial((-&seed.column(k)).plus_part()).scale(&(v(-dk) - v(dk)));
        report.check(lhs == rhs, || format!("X'_{0} X_{0} relation", k + 1));

        for j in (0..n).filter(|&j| j != k) {
            let t = form.eval(&ep[j], &ep[k]);
            let lhs = &(&xp[j] * &xp[k]).scale_v(-t) - &(&xp[k] * &xp[j]).scale_v(t);
            let bjk = seed.b(j, k);
            let eps = bjk.signum();
            let e = -&seed.unit(j) - seed.unit(k)
                + seed.column(j).scale(-eps).plus_part()
                + seed.column(k).scale(eps).plus_part();
            let dj = seed.d()[j];
            let rhs = seed.monomial(e).scale(&(v(-dj * bjk) - v(dj * bjk)));
            report.check(lhs == rhs, || format!("X'_{} X'_{} relation", j + 1, k + 1));
        }
    }
    Ok(())
}

/// The principal seed of `(B, d)` with the natural order, which must be
/// compatible (`b_ij <= 0` for `i < j`).
fn natural_principal(b: &[Vec<i64>], d: &[i64]) -> Result<QuantumSeed> {
    let seed = QuantumSeed::principal(b, d)?;
    let natural: Vec<usize> = (0..d.len()).collect();
    if !seed.order_is_compatible(&natural) {
        return Err(Error::IncompatibleOrder("the natural order needs b_ij <= 0 for i < j".into()));
    }
    seed.with_order(natural)
}

/// For the principal seed of `(B, d)` with `b_ij <= 0` for `i < j`, with
/// `n` the last index and `j` ranging as indicated:
///
/// * `X'_j X_j = X^{-b_j^{<j}} + v^{d_j} X^{b_j^{>j}}` (`j < n`);
/// * `X_j X'_j = v^{-d_j} X^{b_j^{>j}} + X^{-b_j^{<j}}` (`j > 1`);
/// * `X_j X''_j = v^{-d_j} X^{b_j^{>j} + b_nj (e_2n - e_n)} + X^{-b_j^{<j}} (X'_n)^{b_nj}` (`j < n`);
/// * `X''_j = X'_j (X'_n)^{b_nj} - sum_s v^{s^2 d_n} [b_nj, s]_{v^{2 d_n}}
///   X^{-e_j + b_j^{>j} + b_nj (e_2n - e_n) - s b_n}` (`j < n`).
///
/// Here `b_j^{<j}` and `b_j^{>j}` keep the rows of the `j`-th column of
/// `[B; I]` above and below row `j`.
pub fn verify_principal_identities(b: &[Vec<i64>], d: &[i64]) -> Report {
    let mut report = Report::new("principal identities");
    let seed = match natural_principal(b, d) {
        Ok(s) => s,
        Err(e) => {
            report.check(false, || e.to_string());
            return report;
        }
    };
    if let Err(e) = principal_identities(&seed, &mut report) {
        report.check(false, || e.to_string());
    }
    report
}

fn principal_identities(seed: &QuantumSeed, report: &mut Report) -> Result<()> {
    let n = seed.n();
    let m = seed.m();
    let last = n - 1;
    let frame = MutationFrame::new(seed)?;
    let xp: Vec<TorusElement> = (0..n).map(|k| x_prime(seed, k)).collect::<Result<_>>()?;
    let below = |j: usize| -> LatticeVector {
        let col = seed.column(j);
        LatticeVector::new((0..m).map(|i| if i < j { col[i] } else { 0 }))
    };
    let above = |j: usize| -> LatticeVector {
        let col = seed.column(j);
        LatticeVector::new((0..m).map(|i| if i > j { col[i] } else { 0 }))
    };
    let d = seed.d();
    let mono = |e: LatticeVector| seed.monomial(e);

    for j in 0..n {
        let lower = mono(-below(j));
        if j < last {
            let rhs = &lower + &mono(above(j)).scale_v(d[j]);
            report.check(&xp[j] * &seed.x(j) == rhs, || format!("X'_{0} X_{0}", j + 1));
        }
        if j > 0 {
            let rhs = &mono(above(j)).scale_v(-d[j]) + &lower;
            report.check(&seed.x(j) * &xp[j] == rhs, || format!("X_{0} X'_{0}", j + 1));
        }
        if j == last {
            continue;
        }
        let bnj = seed.b(last, j);
        let r = u32::try_from(bnj).map_err(|_| Error::Precondition(format!("b_n{} < 0", j + 1)))?;
        let shift = &seed.unit(m - 1) - &seed.unit(last);
        let top = &above(j) + &shift.scale(bnj);
        let xn_pow = xp[last].pow(r);
        let xdd = frame.x_double_prime(j)?;

        let rhs = &mono(top.clone()).scale_v(-d[j]) + &(&lower * &xn_pow);
        report.check(&seed.x(j) * xdd == rhs, || format!("X_{0} X''_{0}", j + 1));

        let dn = d[last];
        let bn = seed.column(last);
        let mut rhs = &xp[j] * &xn_pow;
        for s in 1..=r {
            let si = i64::from(s);
            let coeff = gaussian_binomial_in(r, s, 2 * dn)?.shift(si * si * dn);
            let e = &(&top - &seed.unit(j)) - &bn.scale(si);
            rhs = &rhs - &mono(e).scale(&coeff);
        }
        report.check(*xdd == rhs, || format!("X''_{} expansion", j + 1));
    }
    Ok(())
}
