use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::qtorus::{LatticeVector, TorusElement};
use crate::seed::QuantumSeed;

use super::{gaussian_binomial_in, x_prime, EExpansion};

/// The seed mutated at its last index, with the cluster variables and the
/// standard monomials `E'_a` of the new seed realized in the initial torus.
///
/// The mutated seed uses the order `k, then the remaining indices in their
/// original order`, which is again compatible.
#[derive(Debug)]
pub struct MutationFrame {
    seed: QuantumSeed,
    k: usize,
    mutated: QuantumSeed,
    x_prime_k: TorusElement,
    e_dd: Vec<LatticeVector>,
    x_dd: Vec<TorusElement>,
    memo: Mutex<HashMap<LatticeVector, TorusElement>>,
}

impl MutationFrame {
    pub fn new(seed: &QuantumSeed) -> Result<Self> {
        seed.require_order_compatible()?;
        let k = *seed
            .order()
            .last()
            .ok_or_else(|| Error::Precondition("seed has no cluster variables".into()))?;
        let mut order = vec![k];
        order.extend(seed.order().iter().copied().filter(|&j| j != k));
        let mutated = seed.mutate(k)?.with_order(order)?;
        mutated.require_order_compatible()?;
        let mut frame = Self {
            seed: seed.clone(),
            k,
            x_prime_k: x_prime(seed, k)?,
            e_dd: Vec::new(),
            x_dd: Vec::new(),
            mutated,
            memo: Mutex::new(HashMap::new()),
        };
        for j in 0..seed.n() {
            let bj = frame.mutated.column(j);
            let e = &bj.plus_part() - &frame.mutated.unit(j);
            let x = if j == k {
                seed.x(k)
            } else {
                &frame.mutated_monomial(&e)? + &frame.mutated_monomial(&(&e - &bj))?
            };
            frame.e_dd.push(e);
            frame.x_dd.push(x);
        }
        Ok(frame)
    }

    pub fn seed(&self) -> &QuantumSeed {
        &self.seed
    }

    /// The mutation index, last in the original order.
    pub fn index(&self) -> usize {
        self.k
    }

    pub fn mutated_seed(&self) -> &QuantumSeed {
        &self.mutated
    }

    /// `X'_k` in the initial torus.
    pub fn x_prime(&self) -> &TorusElement {
        &self.x_prime_k
    }

    /// `e''_j = -e_j + [b'_j]_+`.
    pub fn e_double_prime(&self, j: usize) -> Result<&LatticeVector> {
        self.seed.check_cluster_index(j)?;
        Ok(&self.e_dd[j])
    }

    /// The normalized monomial `(X')^g` of the mutated torus, written in the
    /// initial torus. Requires `g_k >= 0` since `X'_k` has no inverse there.
    pub fn mutated_monomial(&self, g: &LatticeVector) -> Result<TorusElement> {
        g.check_len(self.seed.m())?;
        let p = g[self.k];
        if p < 0 {
            return Err(Error::Precondition(format!(
                "exponent {g} has a negative power of the mutated variable"
            )));
        }
        let mut h = g.clone();
        h[self.k] = 0;
        let twist = -p * self.mutated.form().eval(&h, &self.mutated.unit(self.k));
        let out = &self.seed.monomial(h) * &self.x_prime_k.pow(p as u32);
        Ok(out.scale_v(twist))
    }

    /// `X''_j = (X')^{e''_j} + (X')^{e''_j - b'_j}`; `X''_k = X_k`.
    pub fn x_double_prime(&self, j: usize) -> Result<&TorusElement> {
        self.seed.check_cluster_index(j)?;
        Ok(&self.x_dd[j])
    }

    /// `phi(-e_j) = -e_j - b_kj e_k + [-b'_j]_+^{>n} - [-b_j]_+^{>n}` for
    /// `j != k`.
    pub fn phi_of_minus_unit(&self, j: usize) -> Result<LatticeVector> {
        self.check_non_mutated(j)?;
        let n = self.seed.n();
        let s = &self.seed;
        let mut out = -&s.unit(j) - s.unit(self.k).scale(s.b(self.k, j));
        out += &(-&self.mutated.column(j)).plus_part().frozen_part(n);
        out -= &(-&s.column(j)).plus_part().frozen_part(n);
        Ok(out)
    }

    /// The expansion of `X''_j` (`j != k`) in the initial basis:
    /// `E_{phi(-e_j)} - sum_s v^{s^2 d_k} [b_kj, s]_{v^{2 d_k}} E_{e''_j - s b_k}`.
    pub fn x_double_prime_expansion(&self, j: usize) -> Result<EExpansion> {
        self.check_non_mutated(j)?;
        let s = &self.seed;
        let bkj = s.b(self.k, j);
        let dk = s.d()[self.k];
        let mut out = EExpansion::single(self.phi_of_minus_unit(j)?);
        let r = u32::try_from(bkj)
            .map_err(|_| Error::Precondition(format!("b_kj = {bkj} is negative at a sink")))?;
        let bk = s.column(self.k);
        for t in 1..=r {
            let coeff = gaussian_binomial_in(r, t, 2 * dk)?.shift(i64::from(t * t) * dk);
            out.add(&self.e_dd[j] - &bk.scale(i64::from(t)), &-coeff);
        }
        Ok(out)
    }

    fn check_non_mutated(&self, j: usize) -> Result<()> {
        self.seed.check_cluster_index(j)?;
        if j == self.k {
            return Err(Error::Precondition("index is the mutation index".into()));
        }
        Ok(())
    }

    fn lt_factors(&self, a: &LatticeVector) -> Result<(LatticeVector, Vec<(usize, u32)>)> {
        a.check_len(self.seed.m())?;
        let mut head = a.clone();
        let mut powers = Vec::new();
        for &j in self.mutated.order() {
            if a[j] < 0 {
                head[j] = 0;
                powers.push((j, (-a[j]) as u32));
            }
        }
        Ok((head, powers))
    }

    /// `nu'(a)`, computed in the coordinates of the mutated torus.
    pub fn nu_prime(&self, a: &LatticeVector) -> Result<i64> {
        let (head, powers) = self.lt_factors(a)?;
        let form = self.mutated.form();
        let mut acc = head;
        let mut sigma = 0;
        for (j, p) in powers {
            let f = self.e_dd[j].scale(i64::from(p));
            sigma += form.eval(&acc, &f);
            acc += &f;
        }
        Ok(-sigma)
    }

    /// The standard monomial `E'_a` of the mutated seed, in the initial
    /// torus.
    pub fn eprime_element(&self, a: &LatticeVector) -> Result<TorusElement> {
        if let Some(e) = self.memo.lock().expect("memo poisoned").get(a) {
            return Ok(e.clone());
        }
        let (head, powers) = self.lt_factors(a)?;
        let mut out = self.mutated_monomial(&head)?;
        for (j, p) in powers {
            out = &out * &self.x_dd[j].pow(p);
        }
        let out = out.scale_v(self.nu_prime(a)?);
        self.memo.lock().expect("memo poisoned").insert(a.clone(), out.clone());
        Ok(out)
    }

    /// Rewrites an element of the mutated torus through `X'^g`, assuming
    /// every exponent has a nonnegative `k`-th entry.
    pub fn pull_back(&self, x: &TorusElement) -> Result<TorusElement> {
        if **x.form() != **self.mutated.form() {
            return Err(Error::ContextMismatch);
        }
        let mut out = TorusElement::zero(self.seed.form());
        for (g, c) in x.terms() {
            out = &out + &self.mutated_monomial(g)?.scale(c);
        }
        Ok(out)
    }

    /// `sum c_a E'_a` in the initial torus.
    pub fn assemble(&self, x: &EExpansion) -> Result<TorusElement> {
        let mut out = TorusElement::zero(self.seed.form());
        for (a, c) in x.iter() {
            out = &out + &self.eprime_element(a)?.scale(c);
        }
        Ok(out)
    }
}

/// `sum_{s=0}^r u^{s^2} [r, s]_{u^2} z^s` and `prod_{p=1}^r (1 + u^{2p-1} z)`
/// as coefficient lists in `z`, with `u = v^k`.
pub fn gaussian_product_sides(r: u32, k: i64) -> Result<(Vec<LaurentPoly>, Vec<LaurentPoly>)> {
    let mut sum = Vec::new();
    for s in 0..=r {
        let s2 = i64::from(s * s);
        sum.push(gaussian_binomial_in(r, s, 2 * k)?.shift(s2 * k));
    }
    let mut prod = vec![LaurentPoly::one()];
    for p in 1..=r {
        let u = LaurentPoly::v_pow((2 * i64::from(p) - 1) * k);
        let mut next = vec![LaurentPoly::zero(); prod.len() + 1];
        for (i, c) in prod.iter().enumerate() {
            next[i] += c;
            next[i + 1] += &(c * &u);
        }
        prod = next;
    }
    Ok((sum, prod))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::ebasis::StandardBasis;
    use crate::seed::random_principal_seed;

    fn rank2(b: i64, c: i64) -> QuantumSeed {
        QuantumSeed::principal(&[vec![0, -b], vec![c, 0]], &[c, b]).unwrap()
    }

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::new(x.iter().copied())
    }

    #[test]
    fn mutated_monomials() {
        let s = rank2(2, 1);
        let f = MutationFrame::new(&s).unwrap();
        assert_eq!(f.index(), 1);
        let g = lv(&[1, 0, -2, 1]);
        assert_eq!(f.mutated_monomial(&g).unwrap(), s.monomial(g));
        assert_eq!(&f.mutated_monomial(&lv(&[0, 1, 0, 0])).unwrap(), f.x_prime());
        assert!(f.mutated_monomial(&lv(&[0, -1, 0, 0])).is_err());
        let lam = f.mutated_seed().form().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let mut e = LatticeVector::new((0..4).map(|_| rng.gen_range(-2..=2)));
            let mut h = LatticeVector::new((0..4).map(|_| rng.gen_range(-2..=2)));
            e[1] = e[1].abs();
            h[1] = h[1].abs();
            let lhs = &f.mutated_monomial(&e).unwrap() * &f.mutated_monomial(&h).unwrap();
            let rhs = f.mutated_monomial(&(&e + &h)).unwrap().scale_v(lam.eval(&e, &h));
            assert_eq!(lhs, rhs);
            assert!(f.mutated_monomial(&e).unwrap().is_bar_invariant() || e[1] > 0);
        }
    }

    #[test]
    fn unit_correspondences() {
        for (b, c) in [(1, 1), (2, 1), (1, 2)] {
            let s = rank2(b, c);
            let f = MutationFrame::new(&s).unwrap();
            let basis = StandardBasis::new(s.clone()).unwrap();
            let k = f.index();
            let ek = s.unit(k);
            assert_eq!(&f.eprime_element(&ek).unwrap(), f.x_prime());
            assert_eq!(f.eprime_element(&ek).unwrap(), basis.element(&-&ek).unwrap());
            assert_eq!(f.eprime_element(&-&ek).unwrap(), s.x(k));
            for i in 2..4 {
                for sign in [1, -1] {
                    let e = s.unit(i).scale(sign);
                    assert_eq!(f.eprime_element(&e).unwrap(), s.monomial(e.clone()));
                    assert_eq!(basis.element(&e).unwrap(), s.monomial(e));
                }
            }
            assert_eq!(f.eprime_element(&s.unit(0)).unwrap(), s.x(0));
            assert_eq!(&f.eprime_element(&-&s.unit(0)).unwrap(), f.x_double_prime(0).unwrap());
        }
    }

    #[test]
    fn rank2_double_prime_closed_form() {
        for (b, c) in [(1, 1), (2, 1), (2, 2), (1, 3)] {
            let s = rank2(b, c);
            let f = MutationFrame::new(&s).unwrap();
            let basis = StandardBasis::new(s.clone()).unwrap();
            let mut want = basis.x_prime(0) * &basis.x_prime(1).pow(c as u32);
            for t in 1..=c {
                let coeff = gaussian_binomial_in(c as u32, t as u32, 2 * b).unwrap().shift(b * t * t);
                want = &want - &s.monomial(lv(&[b * t - 1, 0, 1, c - t])).scale(&coeff);
            }
            assert_eq!(f.x_double_prime(0).unwrap(), &want);
            // X_1 X''_1 = v^{-c} X^{(0,0,1,c)} + (X'_2)^c
            let lhs = &s.x(0) * f.x_double_prime(0).unwrap();
            let rhs = &s.monomial(lv(&[0, 0, 1, c])).scale_v(-c) + &basis.x_prime(1).pow(c as u32);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn double_prime_expansion_matches_direct_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut seeds = vec![rank2(1, 1), rank2(2, 2), rank2(1, 3)];
        for _ in 0..12 {
            seeds.push(random_principal_seed(&mut rng, 3, 2, 2));
        }
        for s in seeds {
            let f = MutationFrame::new(&s).unwrap();
            let basis = StandardBasis::new(s.clone()).unwrap();
            for j in 0..s.n() {
                if j == f.index() {
                    continue;
                }
                let x = basis.assemble(&f.x_double_prime_expansion(j).unwrap()).unwrap();
                assert_eq!(&x, f.x_double_prime(j).unwrap());
                assert_eq!(basis.expand_in_e(&x).unwrap(), f.x_double_prime_expansion(j).unwrap());
                if s.b(f.index(), j) == 0 {
                    assert_eq!(f.x_double_prime(j).unwrap(), basis.x_prime(j));
                }
            }
        }
    }

    #[test]
    fn rank2_eprime_closed_form() {
        let p = |x: i64| x.max(0);
        for (b, c) in [(1, 1), (2, 1), (2, 2), (1, 2)] {
            let s = rank2(b, c);
            let f = MutationFrame::new(&s).unwrap();
            let basis = StandardBasis::new(s.clone()).unwrap();
            for a1 in -2..=2i64 {
                for a2 in -2..=2i64 {
                    for (a3, a4) in [(0, 0), (1, 0), (0, 1), (-1, 2)] {
                        let a = lv(&[a1, a2, a3, a4]);
                        let prod = [
                            s.monomial(lv(&[0, 0, a3, a4])),
                            s.x(1).pow(p(-a2) as u32),
                            s.x(0).pow(p(a1) as u32),
                            basis.x_prime(1).pow(p(a2) as u32),
                            f.x_double_prime(0).unwrap().pow(p(-a1) as u32),
                        ]
                        .iter()
                        .fold(TorusElement::one(s.form()), |acc, x| &acc * x);
                        let expo = b * c * (p(-a1) * p(-a2) + p(-a1) * a4 - c * p(-a1) * a3 - p(a2) * a3)
                            - c * a1 * a3
                            + b * a2 * a4;
                        let got = f.eprime_element(&a).unwrap();
                        assert_eq!(got, prod.scale_v(expo), "a = {a}, (b,c) = ({b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn gaussian_product_identity() {
        for r in 0..=6 {
            for k in 1..=2 {
                let (sum, prod) = gaussian_product_sides(r, k).unwrap();
                assert_eq!(sum, prod);
            }
        }
    }
}
