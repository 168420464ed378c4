//! Acceptance suite: eight criteria, each checked with exact equality.
//! Prints one PASS/FAIL line per criterion and exits nonzero on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qca_core::ebasis::{gaussian_product_sides, EExpansion, StandardBasis};
use qca_core::examples::{
    a11_seed, nu_explicit, rank2_principal, verify_c_conditions, verify_chebyshev,
    verify_crystal_identities, verify_frozen_shift, verify_generator_relations, verify_labeling,
    verify_lemma_ea_x0, verify_order_transposition, verify_principal_identities,
    verify_psi_embedding, CrystalFamily, CrystalMonomialIndex, Kronecker, Report,
};
use qca_core::laurent::LaurentPoly;
use qca_core::lusztig::{compare_bases, verify_c_properties, verify_r_closure, BasisPair, TieBreak, TriangularTable};
use qca_core::qtorus::{lattice_box, LatticeVector};
use qca_core::seed::{random_principal_seed, QuantumSeed};

const RNG_SEED: u64 = 0x5eed;

fn lv(x: &[i64]) -> LatticeVector {
    LatticeVector::new(x.iter().copied())
}

fn random_vector(rng: &mut ChaCha8Rng, m: usize, w: i64) -> LatticeVector {
    LatticeVector::new((0..m).map(|_| rng.gen_range(-w..=w)))
}

fn expansion(terms: &[(&[i64], LaurentPoly)]) -> EExpansion {
    terms.iter().map(|(a, c)| (lv(a), c.clone())).collect()
}

fn base_case() -> Report {
    let mut report = Report::new("base case");
    let k = Kronecker::new().expect("Kronecker seed");
    let v = LaurentPoly::v_pow;
    let want = expansion(&[(&[-1, -1], LaurentPoly::one()), (&[1, 1], -v(4))]);
    let row = k.table().compute(&lv(&[-1, -1])).expect("C(-1,-1)");
    report.check(row.expansion() == want, || format!("C(-1,-1) = {}", row.expansion().display(2)));
    let x = |m| k.var(m).expect("within horizon").clone();
    let x_delta = &(&x(3) * &x(0)).scale_v(1) - &(&x(2) * &x(1)).scale_v(3);
    report.check(row.element == x_delta, || format!("C(-1,-1) = {}, X_delta = {x_delta}", row.element));
    report.check(row.element.is_bar_invariant(), || "C(-1,-1) not bar-invariant".into());
    report
}

fn lemma_tables() -> Report {
    let k = Kronecker::new().expect("Kronecker seed");
    let mut report = verify_lemma_ea_x0(&k, 3);
    let basis = k.table().basis();
    let v = LaurentPoly::v_pow;
    let printed: [(&[i64], EExpansion); 3] = [
        (&[0, -1], EExpansion::new()),
        (&[1, 1], expansion(&[(&[3, 0], v(2))])),
        (&[-1, 1], expansion(&[(&[1, 0], v(2)), (&[1, 2], v(6))])),
    ];
    for (a, want) in printed {
        let a = lv(a);
        let got = (|| {
            let x = (&basis.element(&a)? * k.var(0)?).scale_v(-a[0]);
            let y = basis.element(&lv(&[a[0], a[1] - 1]))?;
            basis.expand_in_e(&(&x - &y))
        })();
        report.check_result(got.map(|g| g == want), || format!("printed case a={a}"));
    }
    report
}

fn basis_independence() -> Report {
    let mut report = Report::new("basis independence");
    let pts = lattice_box(&[-2..=2, -2..=2, 0..=0, 0..=0]);
    for (b, c) in [(1, 1), (2, 1)] {
        let seed = rank2_principal(b, c).expect("rank-2 principal seed");
        match compare_bases(&seed, &pts) {
            Ok(rows) => {
                for r in rows {
                    report.check(r.equal, || format!("(b,c)=({b},{c}): C'{} != C at {:?}", r.a, r.phi));
                }
            }
            Err(e) => report.check(false, || format!("(b,c)=({b},{c}): {e}")),
        }
    }
    report
}

fn random_seeds(rng: &mut ChaCha8Rng, count: usize) -> Vec<QuantumSeed> {
    (0..count).map(|i| random_principal_seed(rng, 1 + i % 3, 2, 2)).collect()
}

fn identity_suites() -> Report {
    let mut report = Report::new("identity suites");
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    for seed in random_seeds(&mut rng, 20) {
        report.absorb(verify_generator_relations(&seed));
        let n = seed.n();
        let b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed.b(i, j)).collect()).collect();
        report.absorb(verify_principal_identities(&b, seed.d()));
    }
    let mut gauss = Report::new("gaussian product");
    for r in 0..=6 {
        for k in 1..=3 {
            gauss.check_result(gaussian_product_sides(r, k).map(|(s, p)| s == p), || format!("r={r}, k={k}"));
        }
    }
    report.absorb(gauss);
    for (b, c) in [(1, 1), (2, 1), (2, 2)] {
        report.absorb(verify_crystal_identities(b, c, 2));
        let mut nu = Report::new(format!("nu (b={b}, c={c})"));
        let family = CrystalFamily::new(b, c).expect("crystal family");
        for _ in 0..200 {
            let t = [
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3),
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
                rng.gen_range(0..=3),
            ];
            let mm = CrystalMonomialIndex::new(t).expect("nonnegative tail");
            nu.check(family.nu(&mm) == nu_explicit(b, c, &mm), || format!("nu{mm}"));
        }
        report.absorb(nu);
    }
    report
}

fn basis_properties(seed: &QuantumSeed, rng: &mut ChaCha8Rng, c_samples: &[LatticeVector]) -> Report {
    let mut report = Report::new("standard and triangular bases");
    let table = TriangularTable::for_seed(seed.clone()).expect("acyclic seed");
    let basis: &StandardBasis = table.basis();
    let n = seed.n();
    for _ in 0..100 {
        let a = random_vector(rng, seed.m(), 3);
        let one = expansion(&[(a.entries(), LaurentPoly::one())]);
        report.check_result(basis.element(&a).and_then(|x| basis.expand_in_e(&x)).map(|x| x == one), || {
            format!("expand(E{a})")
        });
    }
    for _ in 0..25 {
        let a = random_vector(rng, seed.m(), 2);
        let row = table.r_row(&a);
        report.check_result(row.map(|r| r.keys().all(|b| b.r_value(n) < a.r_value(n))), || {
            format!("r-row of {a} not below")
        });
        report.check_result(verify_r_closure(&table, &a), || format!("r-row closure at {a}"));
    }
    for a in c_samples {
        let checked = (|| {
            let row = table.compute(a)?;
            let props = verify_c_properties(basis, &row)?;
            let again = table.compute_with(a, TieBreak::LexAscending)?;
            Ok(props.passed() && again == *row)
        })();
        report.check_result(checked, || format!("C{a}"));
    }
    report
}

fn structural_properties() -> Report {
    let mut report = Report::new("structural properties");
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED + 1);
    let small = lattice_box(&[-2..=2, -2..=2]);
    let frozen_small = lattice_box(&[-1..=1, -1..=1, 0..=1, -1..=0]);
    let three = random_principal_seed(&mut rng, 3, 2, 1);
    let three_c: Vec<_> = (0..6).map(|_| random_vector(&mut rng, 6, 1)).collect();
    for (seed, c) in [
        (a11_seed(), small.clone()),
        (rank2_principal(1, 1).expect("seed"), frozen_small.clone()),
        (rank2_principal(2, 1).expect("seed"), frozen_small.clone()),
        (three, three_c),
    ] {
        report.absorb(basis_properties(&seed, &mut rng, &c));
    }

    let mut transposition = Report::new("order transposition");
    let disconnected = QuantumSeed::principal(&[vec![0, 0, -1], vec![0, 0, -1], vec![2, 2, 0]], &[2, 2, 1])
        .and_then(|s| s.with_order(vec![0, 1, 2]))
        .expect("acyclic seed with b_12 = 0");
    let mut seeds = vec![disconnected];
    while seeds.len() < 4 {
        let s = random_principal_seed(&mut rng, 3, 2, 1);
        let o = s.order();
        if (0..2).any(|p| s.b(o[p], o[p + 1]) == 0) {
            seeds.push(s);
        }
    }
    for seed in &seeds {
        let samples: Vec<_> = (0..8).map(|_| random_vector(&mut rng, seed.m(), 1)).collect();
        transposition.absorb(verify_order_transposition(seed, &samples, 2));
    }
    report.check(transposition.total() > 0, || "order transposition: no checks ran".into());
    report.absorb(transposition);

    let mut shift = Report::new("frozen shift");
    for (b, c) in [(1, 1), (2, 1)] {
        let pair = BasisPair::new(&rank2_principal(b, c).expect("seed")).expect("basis pair");
        let samples: Vec<_> = (0..25)
            .map(|_| {
                let a = lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-1..=1), rng.gen_range(-1..=1)]);
                let a0 = lv(&[0, 0, rng.gen_range(-2..=2), rng.gen_range(-2..=2)]);
                (a, a0)
            })
            .collect();
        shift.absorb(verify_frozen_shift(&pair, &samples));
    }
    report.check(shift.total() == 50, || format!("frozen shift ran {} checks", shift.total()));
    report.absorb(shift);

    for seed in [a11_seed(), rank2_principal(2, 1).expect("seed")] {
        let samples: Vec<_> = (0..50).map(|_| random_vector(&mut rng, 2 * seed.n(), 1)).collect();
        report.absorb(verify_psi_embedding(&seed, &samples));
    }
    report
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Report,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "C(-1,-1) equals X_delta", budget: Duration::from_secs(1), run: base_case },
        Criterion {
            id: 2,
            title: "C(-r,-r) = S_r(X_delta) and product form",
            budget: Duration::from_secs(60),
            run: || verify_chebyshev(&Kronecker::new().expect("Kronecker seed"), 4),
        },
        Criterion {
            id: 3,
            title: "cluster monomial labels",
            budget: Duration::from_secs(60),
            run: || verify_labeling(&Kronecker::new().expect("Kronecker seed"), -1..=3, 2),
        },
        Criterion { id: 4, title: "E_a X_0 case tables", budget: Duration::from_secs(30), run: lemma_tables },
        Criterion {
            id: 5,
            title: "mutated monomials and phi",
            budget: Duration::from_secs(300),
            run: || {
                let mut r = Report::new("mutated monomials");
                for (b, c) in [(1, 1), (2, 1), (2, 2)] {
                    r.absorb(verify_c_conditions(b, c, 2));
                }
                r
            },
        },
        Criterion {
            id: 6,
            title: "basis independence under mutation",
            budget: Duration::from_secs(300),
            run: basis_independence,
        },
        Criterion { id: 7, title: "identity suites", budget: Duration::from_secs(300), run: identity_suites },
        Criterion {
            id: 8,
            title: "structural properties",
            budget: Duration::from_secs(600),
            run: structural_properties,
        },
    ];

    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let report = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed < c.budget;
        let ok = report.ok() && report.total() > 0 && in_time;
        println!(
            "{} criterion {}: {} ({} checks, {} failed, {:.2?} of {:?})",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            report.total(),
            report.failed,
            elapsed,
            c.budget,
        );
        if let Some(first) = &report.first_failure {
            println!("  first failure: {first}");
        }
        if !in_time {
            println!("  over time budget");
        }
        if !ok {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
