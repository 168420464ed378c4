//! The standard monomial basis `{E_a}` of an acyclic quantum cluster
//! algebra, expansion of torus elements in it, and the bar-triangularity
//! matrix `r`.
//!
//! ```
//! use qca_core::ebasis::StandardBasis;
//! use qca_core::examples::a11_seed;
//!
//! let basis = StandardBasis::new(a11_seed()).unwrap();
//! let row = basis.r_row(&[-1, -1].into()).unwrap();
//! assert_eq!(row.display(2), "(v^-4 - v^4) E(1,1)");
//! ```

mod expansion;
mod mutation;

use std::collections::HashMap;
use std::sync::Mutex;

pub use expansion::EExpansion;
pub use mutation::{gaussian_product_sides, MutationFrame};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::qtorus::{leading_monomial, LatticeVector, TorusElement, WeightOrder};
use crate::seed::QuantumSeed;

/// Default number of reduction steps before [`StandardBasis::expand`] gives
/// up.
pub const DEFAULT_EXPANSION_CAP: usize = 100_000;

/// The elements `E_a` of an acyclic seed with its chosen linear order,
/// together with a memo of the ones already built.
///
/// The memo is shared behind a mutex; concurrent callers may compute the
/// same element twice but always store identical values.
#[derive(Debug)]
pub struct StandardBasis {
    seed: QuantumSeed,
    ord: WeightOrder,
    topo: Vec<usize>,
    e_prime: Vec<LatticeVector>,
    x_prime: Vec<TorusElement>,
    memo: Mutex<HashMap<LatticeVector, TorusElement>>,
}

impl StandardBasis {
    pub fn new(seed: QuantumSeed) -> Result<Self> {
        let topo = seed.topological_order().ok_or(Error::NotAcyclic)?;
        let e_prime = (0..seed.n()).map(|k| seed.e_prime_vec(k)).collect::<Result<Vec<_>>>()?;
        let x_prime = (0..seed.n()).map(|k| x_prime(&seed, k)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ord: seed.weight_order(),
            seed,
            topo,
            e_prime,
            x_prime,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn seed(&self) -> &QuantumSeed {
        &self.seed
    }

    pub fn weight_order(&self) -> &WeightOrder {
        &self.ord
    }

    /// `X'_k`, the cluster variable obtained by mutating at `k`.
    pub fn x_prime(&self, k: usize) -> &TorusElement {
        &self.x_prime[k]
    }

    fn check(&self, a: &LatticeVector) -> Result<()> {
        a.check_len(self.seed.m())
    }

    /// Exponents of the ordered factors of `E_a°` after the substitution
    /// `X'_k -> X^{e'_k}`: the leading monomial, then `(e'_k, [-a_k]_+)` in
    /// the seed's order.
    fn lt_factors(&self, a: &LatticeVector) -> (LatticeVector, Vec<(usize, i64)>) {
        let n = self.seed.n();
        let mut head = a.clone();
        let mut powers = Vec::new();
        for &k in self.seed.order() {
            if a[k] < 0 {
                head[k] = 0;
                powers.push((k, -a[k]));
            }
        }
        debug_assert!(head.cluster_part(n).iter().all(|x| x >= 0));
        (head, powers)
    }

    /// `lead(a) = a^{>n} + [a]_+^{<=n} + sum_k [-a_k]_+ e'_k`, the exponent
    /// of the leading monomial of `E_a`.
    pub fn lead(&self, a: &LatticeVector) -> LatticeVector {
        let (mut t, powers) = self.lt_factors(a);
        for (k, p) in powers {
            t += &self.e_prime[k].scale(p);
        }
        t
    }

    /// The unique `a` with `lead(a) = t`, solved vertex by vertex along a
    /// topological order of the exchange graph.
    pub fn lead_inverse(&self, t: &LatticeVector) -> Result<LatticeVector> {
        self.check(t)?;
        let (m, n) = (self.seed.m(), self.seed.n());
        let mut a = t.clone();
        let mut q = vec![0i64; n];
        for &k in &self.topo {
            // [b_kj]_+ > 0 only for j earlier in the topological order.
            let shift: i64 = (0..n).map(|j| q[j] * self.seed.b(k, j).max(0)).sum();
            a[k] = t[k] - shift;
            q[k] = (-a[k]).max(0);
        }
        for i in n..m {
            a[i] = t[i] - (0..n).map(|k| q[k] * self.seed.b(i, k).max(0)).sum::<i64>();
        }
        Ok(a)
    }

    /// `nu(a)`: the power of `v` making `v^nu LT(E_a°)` bar-invariant.
    pub fn nu(&self, a: &LatticeVector) -> i64 {
        let (head, powers) = self.lt_factors(a);
        let form = self.seed.form();
        let mut acc = head;
        let mut sigma = 0;
        for (k, p) in powers {
            let f = &self.e_prime[k];
            sigma += p * form.eval(&acc, f);
            acc += &f.scale(p);
        }
        -sigma
    }

    /// `E_a° = X^{a^{>n} + [a]_+^{<=n}} prod (X'_k)^{[-a_k]_+}`, the product
    /// taken in the seed's order.
    pub fn standard_monomial(&self, a: &LatticeVector) -> Result<TorusElement> {
        self.check(a)?;
        let (head, powers) = self.lt_factors(a);
        let mut out = self.seed.monomial(head);
        for (k, p) in powers {
            out = &out * &self.x_prime[k].pow(p as u32);
        }
        Ok(out)
    }

    /// The normalized element `E_a = v^{nu(a)} E_a°`.
    pub fn element(&self, a: &LatticeVector) -> Result<TorusElement> {
        if let Some(e) = self.memo.lock().expect("memo poisoned").get(a) {
            return Ok(e.clone());
        }
        let e = self.standard_monomial(a)?.scale_v(self.nu(a));
        self.memo.lock().expect("memo poisoned").insert(a.clone(), e.clone());
        Ok(e)
    }

    /// Number of memoized elements.
    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo poisoned").len()
    }

    /// Writes `x` as `sum c_a E_a` by repeatedly cancelling the leading
    /// term. Fails if `x` is not in the span within `cap` steps.
    pub fn expand(&self, x: &TorusElement, cap: usize) -> Result<EExpansion> {
        if **x.form() != **self.seed.form() {
            return Err(Error::ContextMismatch);
        }
        let mut rem = x.clone();
        let mut out = EExpansion::new();
        let mut steps = 0;
        while !rem.is_zero() {
            if steps >= cap {
                return Err(Error::ExpansionCap(cap));
            }
            steps += 1;
            let (g, c) = leading_monomial(&rem, &self.ord)?;
            let a = self.lead_inverse(&g)?;
            let e = self.element(&a)?;
            debug_assert!(e.coeff(&g).is_one());
            rem = &rem - &e.scale(&c);
            out.add(a, &c);
        }
        Ok(out)
    }

    /// [`expand`](Self::expand) with the default cap.
    pub fn expand_in_e(&self, x: &TorusElement) -> Result<EExpansion> {
        self.expand(x, DEFAULT_EXPANSION_CAP)
    }

    /// Reassembles `sum c_a E_a` in the torus.
    pub fn assemble(&self, x: &EExpansion) -> Result<TorusElement> {
        let mut out = TorusElement::zero(self.seed.form());
        for (a, c) in x.iter() {
            out = &out + &self.element(a)?.scale(c);
        }
        Ok(out)
    }

    /// The row `r_{a, .}` defined by `bar(E_a) = E_a + sum r_{a,a'} E_{a'}`.
    pub fn r_row(&self, a: &LatticeVector) -> Result<EExpansion> {
        let e = self.element(a)?;
        self.expand_in_e(&(&e.bar() - &e))
    }
}

/// `X'_k = X^{e'_k} + X^{e'_k - b_k}`.
pub fn x_prime(seed: &QuantumSeed, k: usize) -> Result<TorusElement> {
    let e = seed.e_prime_vec(k)?;
    let lower = &e - &seed.column(k);
    Ok(&seed.monomial(e) + &seed.monomial(lower))
}

/// The lattice vector `e'_k = -e_k + [b_k]_+`.
pub fn e_prime_vec(seed: &QuantumSeed, k: usize) -> Result<LatticeVector> {
    seed.e_prime_vec(k)
}

/// Convenience: `E_a` for a seed, without keeping the basis around.
pub fn standard_element(seed: &QuantumSeed, a: &LatticeVector) -> Result<TorusElement> {
    StandardBasis::new(seed.clone())?.element(a)
}

/// `[r choose s]_{v^k}` as a Laurent polynomial in `v`.
pub fn gaussian_binomial_in(r: u32, s: u32, k: i64) -> Result<LaurentPoly> {
    Ok(crate::laurent::gaussian_binomial(r, s)?.substitute_power(k))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::seed::random_principal_seed;

    fn a11() -> QuantumSeed {
        QuantumSeed::new(
            vec![vec![0, -2], vec![2, 0]],
            vec![vec![0, -1], vec![1, 0]],
            vec![2, 2],
            None,
        )
        .unwrap()
    }

    fn rank2(b: i64, c: i64) -> QuantumSeed {
        QuantumSeed::principal(&[vec![0, -b], vec![c, 0]], &[c, b]).unwrap()
    }

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::new(x.iter().copied())
    }

    fn mono(s: &QuantumSeed, e: &[i64], k: i64) -> TorusElement {
        s.monomial(lv(e)).scale_v(k)
    }

    #[test]
    fn e_prime_vectors() {
        let s = a11();
        assert_eq!(s.e_prime_vec(0).unwrap(), lv(&[-1, 2]));
        assert_eq!(s.e_prime_vec(1).unwrap(), lv(&[0, -1]));
        let z = QuantumSeed::principal(&vec![vec![0; 2]; 2], &[1, 1]).unwrap();
        assert_eq!(z.e_prime_vec(1).unwrap(), lv(&[0, -1, 0, 1]));
    }

    #[test]
    fn x_prime_examples() {
        let s = a11();
        let x2 = x_prime(&s, 1).unwrap();
        assert_eq!(x2, &mono(&s, &[0, -1], 0) + &mono(&s, &[2, -1], 0));
        assert_eq!(x2.bar(), x2);
        let (b, c) = (2, 3);
        let p = rank2(b, c);
        assert_eq!(
            x_prime(&p, 0).unwrap(),
            &mono(&p, &[-1, c, 1, 0], 0) + &mono(&p, &[-1, 0, 0, 0], 0)
        );
        // exchange relation X_k X'_k = v^{-d_k} X^{[b_k]_+} + X^{[-b_k]_+}
        for k in 0..2 {
            let bk = p.column(k);
            let lhs = &p.x(k) * &x_prime(&p, k).unwrap();
            let rhs = &p.monomial(bk.plus_part()).scale_v(-p.d()[k]) + &p.monomial((-&bk).plus_part());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kronecker_standard_monomials() {
        let s = a11();
        let basis = StandardBasis::new(s.clone()).unwrap();
        let a = lv(&[-1, -1]);
        let raw = basis.standard_monomial(&a).unwrap();
        let expected = &(&(&mono(&s, &[1, 1], 4) + &mono(&s, &[-1, 1], 0)) + &mono(&s, &[1, -1], 0))
            + &mono(&s, &[-1, -1], 0);
        // X'_1 X'_2 = v^{-1} (v^4 X^(1,1) + X^(-1,1) + X^(1,-1) + X^(-1,-1))
        assert_eq!(raw, expected.scale_v(-1));
        assert_eq!(raw, basis.x_prime(0) * basis.x_prime(1));
        assert_eq!(basis.nu(&a), 1);
        assert_eq!(basis.element(&a).unwrap(), expected);
        assert_eq!(basis.lead(&a), lv(&[-1, 1]));

        // E_(1,1) = X^(1,1) = v X_1 X_2
        let e11 = basis.element(&lv(&[1, 1])).unwrap();
        assert_eq!(e11, mono(&s, &[1, 1], 0));
        assert_eq!(e11, (&s.x(0) * &s.x(1)).scale_v(1));
        assert_eq!(basis.nu(&lv(&[3, 2])), 0);
    }

    #[test]
    fn lead_inverse_examples() {
        let basis = StandardBasis::new(a11()).unwrap();
        assert_eq!(basis.lead_inverse(&lv(&[-1, 1])).unwrap(), lv(&[-1, -1]));
        let z = StandardBasis::new(QuantumSeed::principal(&vec![vec![0; 2]; 2], &[1, 1]).unwrap()).unwrap();
        let t = lv(&[2, 0, -1, 3]);
        assert_eq!(z.lead_inverse(&t).unwrap(), t);
    }

    #[test]
    fn lead_round_trip_on_random_seeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let n = rng.gen_range(1..=3);
            let basis = StandardBasis::new(random_principal_seed(&mut rng, n, 2, 2)).unwrap();
            for _ in 0..20 {
                let t = LatticeVector::new((0..2 * n).map(|_| rng.gen_range(-4..=4)));
                let a = basis.lead_inverse(&t).unwrap();
                assert_eq!(basis.lead(&a), t);
                assert_eq!(basis.lead_inverse(&basis.lead(&a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn leading_term_of_e_is_bar_invariant_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let basis = StandardBasis::new(random_principal_seed(&mut rng, 3, 2, 2)).unwrap();
            for _ in 0..5 {
                let a = LatticeVector::new((0..6).map(|_| rng.gen_range(-2..=2)));
                let e = basis.element(&a).unwrap();
                let (g, c) = leading_monomial(&e, basis.weight_order()).unwrap();
                assert_eq!(g, basis.lead(&a));
                assert!(c.is_one());
            }
        }
    }

    #[test]
    fn kronecker_expansions() {
        let s = a11();
        let basis = StandardBasis::new(s.clone()).unwrap();
        let a = lv(&[-1, -1]);
        let e = basis.element(&a).unwrap();
        let got = basis.expand_in_e(&e.bar()).unwrap();
        let want: EExpansion = [
            (a.clone(), LaurentPoly::one()),
            (lv(&[1, 1]), "v^-4 - v^4".parse().unwrap()),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        let row = basis.r_row(&a).unwrap();
        assert_eq!(row.display(2), "(v^-4 - v^4) E(1,1)");
        assert!(basis.r_row(&lv(&[2, 3])).unwrap().is_empty());
    }

    #[test]
    fn expansion_of_basis_elements_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..6 {
            let n = rng.gen_range(1..=3);
            let basis = StandardBasis::new(random_principal_seed(&mut rng, n, 2, 2)).unwrap();
            for _ in 0..10 {
                let a = LatticeVector::new((0..2 * n).map(|_| rng.gen_range(-2..=2)));
                let e = basis.element(&a).unwrap();
                assert_eq!(basis.expand_in_e(&e).unwrap(), EExpansion::single(a.clone()));
                let row = basis.r_row(&a).unwrap();
                for k in row.keys() {
                    assert!(k.r_value(n) < a.r_value(n));
                }
                let x = basis.expand_in_e(&e.bar()).unwrap();
                assert!(x.coeff(&a).is_one());
            }
        }
    }

    #[test]
    fn expansion_outside_the_span_hits_cap() {
        let basis = StandardBasis::new(a11()).unwrap();
        // X_2^{-1} is a Laurent monomial outside the algebra.
        let x = basis.seed().monomial(lv(&[0, -1]));
        assert_eq!(basis.expand(&x, 40), Err(Error::ExpansionCap(40)));
        let other = QuantumSeed::principal(&[vec![0]], &[2]).unwrap();
        let wrong = other.monomial(lv(&[1, 0]));
        assert_eq!(basis.expand(&wrong, 5), Err(Error::ContextMismatch));
    }

    #[test]
    fn rank2_closed_form_of_e() {
        let p = |x: i64| x.max(0) as u32;
        for (b, c) in [(1, 1), (2, 1), (2, 2), (1, 3)] {
            let s = rank2(b, c);
            let basis = StandardBasis::new(s.clone()).unwrap();
            for a1 in -2..=2i64 {
                for a2 in -2..=2i64 {
                    for (a3, a4) in [(0, 0), (1, -1), (-2, 1)] {
                        let a = lv(&[a1, a2, a3, a4]);
                        let prod = [
                            s.monomial(lv(&[0, 0, a3, a4])),
                            basis.x_prime(0).pow(p(-a1)),
                            s.x(1).pow(p(a2)),
                            s.x(0).pow(p(a1)),
                            basis.x_prime(1).pow(p(-a2)),
                        ]
                        .iter()
                        .fold(TorusElement::one(s.form()), |acc, f| &acc * f);
                        let expo = -c * a1 * a3 - b * a2 * a4 - b * c * (-a2).max(0) * a3;
                        assert_eq!(basis.element(&a).unwrap(), prod.scale_v(expo), "a = {a}");
                    }
                }
            }
        }
    }
}
