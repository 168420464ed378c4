use std::ops::RangeInclusive;
use std::path::PathBuf;

use qca_core::ebasis::gaussian_product_sides;
use qca_core::examples::{
    rank2_principal, verify_c_conditions, verify_chebyshev, verify_closed_form,
    verify_crystal_identities, verify_generator_relations, verify_labeling, verify_lemma_ea_x0,
    verify_principal_identities, verify_psi_embedding, verify_sharp_order, Kronecker, Report,
    DEFAULT_HORIZON,
};
use qca_core::io::{read_seed, RowCache};
use qca_core::lusztig::BasisPair;
use qca_core::qtorus::{lattice_box, LatticeVector};
use qca_core::seed::{random_principal_seed, QuantumSeed};
use qca_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::output::Outcome;
use crate::{Context, VerifyCmd};

type Suite<'a> = Box<dyn Fn() -> Report + Send + Sync + 'a>;

fn run_all(suites: Vec<Suite<'_>>) -> Vec<Report> {
    suites.par_iter().map(|s| s()).collect()
}

pub fn run(ctx: &Context, cmd: VerifyCmd) -> Result<Outcome> {
    match cmd {
        VerifyCmd::Kronecker { rmax, window } => kronecker(rmax, window),
        VerifyCmd::Rank2Principal { b, c, bound } => rank2(b, c, bound),
        VerifyCmd::Identities { seed, count, n_max, max_entry } => identities(ctx, seed, count, n_max, max_entry),
        VerifyCmd::Psi { seed, samples, width } => psi(ctx, seed, samples, width),
        VerifyCmd::CompareBases { seed, window } => compare(ctx, seed, window),
    }
}

fn kronecker(rmax: u32, window: i64) -> Result<Outcome> {
    if window < 0 {
        return Err(Error::Precondition("--window must be nonnegative".into()));
    }
    let horizon = DEFAULT_HORIZON.max(i64::from(rmax) + 3);
    let k = Kronecker::with_horizon(horizon)?;
    let labels: RangeInclusive<i64> = -1..=3;
    let suites: Vec<Suite> = vec![
        Box::new(|| verify_chebyshev(&k, rmax)),
        Box::new(|| verify_labeling(&k, labels.clone(), 2)),
        Box::new(|| verify_lemma_ea_x0(&k, window)),
        Box::new(|| verify_closed_form(&k, window)),
        Box::new(|| verify_sharp_order(&k, window)),
    ];
    Ok(Outcome::from_reports("kronecker", run_all(suites)))
}

fn rank2(b: i64, c: i64, bound: i64) -> Result<Outcome> {
    if b < 1 || c < 1 || bound < 0 {
        return Err(Error::Precondition("need b, c >= 1 and --box >= 0".into()));
    }
    let seed = rank2_principal(b, c)?;
    let suites: Vec<Suite> = vec![
        Box::new(|| verify_crystal_identities(b, c, bound)),
        Box::new(|| verify_c_conditions(b, c, bound)),
        Box::new(|| verify_principal_identities(&[vec![0, -b], vec![c, 0]], &[c, b])),
        Box::new(|| verify_generator_relations(&seed)),
    ];
    Ok(Outcome::from_reports("rank2-principal", run_all(suites)))
}

fn gaussian_report() -> Report {
    let mut r = Report::new("gaussian product");
    for s in 0..=6 {
        for k in 1..=3 {
            r.check_result(gaussian_product_sides(s, k).map(|(x, y)| x == y), || format!("r={s}, k={k}"));
        }
    }
    r
}

fn exchange_part(seed: &QuantumSeed) -> Vec<Vec<i64>> {
    let n = seed.n();
    (0..n).map(|i| (0..n).map(|j| seed.b(i, j)).collect()).collect()
}

fn identities(ctx: &Context, seed: Option<PathBuf>, count: usize, n_max: usize, max_entry: i64) -> Result<Outcome> {
    if let Some(path) = seed {
        let seed = read_seed(&path)?;
        return Ok(Outcome::from_reports("identities", vec![verify_generator_relations(&seed), gaussian_report()]));
    }
    if n_max == 0 || max_entry < 0 {
        return Err(Error::Precondition("need --n-max >= 1 and --max-entry >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.random_seed);
    let seeds: Vec<QuantumSeed> =
        (0..count).map(|i| random_principal_seed(&mut rng, 1 + i % n_max, max_entry, 2)).collect();
    let (mut relations, mut principal) =
        (Report::new("generator relations"), Report::new("principal identities"));
    let per_seed: Vec<(Report, Report)> = seeds
        .par_iter()
        .map(|s| (verify_generator_relations(s), verify_principal_identities(&exchange_part(s), s.d())))
        .collect();
    for (r, p) in per_seed {
        relations.absorb(r);
        principal.absorb(p);
    }
    Ok(Outcome::from_reports("identities", vec![relations, principal, gaussian_report()]))
}

fn psi(ctx: &Context, seed: PathBuf, samples: usize, width: i64) -> Result<Outcome> {
    let seed = read_seed(&seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.random_seed);
    let dim = 2 * seed.n();
    let points: Vec<LatticeVector> = (0..samples)
        .map(|_| LatticeVector::new((0..dim).map(|_| rng.gen_range(-width..=width))))
        .collect();
    Ok(Outcome::from_reports("psi", vec![verify_psi_embedding(&seed, &points)]))
}

fn compare(ctx: &Context, seed: PathBuf, window: i64) -> Result<Outcome> {
    let seed = read_seed(&seed)?;
    let pair = BasisPair::new(&seed)?;
    let mut caches = Vec::new();
    if let Some(dir) = &ctx.cache_dir {
        for (s, table) in [(&seed, &pair.initial), (pair.frame.mutated_seed(), &pair.mutated)] {
            let cache = RowCache::open(dir, s)?;
            cache.preload(table);
            caches.push(cache);
        }
    }
    let ranges: Vec<RangeInclusive<i64>> =
        (0..seed.m()).map(|i| if i < seed.n() { -window..=window } else { 0..=0 }).collect();
    let points = lattice_box(&ranges);
    let results: Vec<_> = points.par_iter().map(|a| (a, pair.compare(a))).collect();
    let mut report = Report::new("C' versus C");
    for (a, r) in results {
        match r {
            Ok(cmp) => report.check(cmp.equal, || match &cmp.phi {
                Some(p) => format!("C'{a} != C{p}"),
                None => format!("E'{a} has no unique unit coefficient"),
            }),
            Err(e) => report.check(false, || format!("a={a}: {e}")),
        }
    }
    for (cache, table) in caches.iter_mut().zip([&pair.initial, &pair.mutated]) {
        cache.absorb(table);
        cache.save()?;
    }
    Ok(Outcome::from_reports("compare-bases", vec![report]))
}
