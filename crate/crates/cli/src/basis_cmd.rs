use std::path::PathBuf;

use qca_core::ebasis::EExpansion;
use qca_core::io::{element_records, element_to_json, read_seed, write_text, RowCache};
use qca_core::laurent::LaurentPoly;
use qca_core::lusztig::{CRow, TriangularTable};
use qca_core::qtorus::{LatticeVector, TorusElement};
use qca_core::{Error, Result};
use rayon::prelude::*;
use serde_json::json;

use crate::output::Outcome;
use crate::{BasisArgs, BasisKind, Context};

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(dir).join("qca"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("qca"))
}

struct Computed {
    a: LatticeVector,
    expansion: EExpansion,
    element: TorusElement,
    cache_hit: Option<bool>,
}

pub fn run(ctx: &Context, args: BasisArgs) -> Result<Outcome> {
    let seed = read_seed(&args.seed)?;
    let points: Vec<LatticeVector> = args.a.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    if let Some(p) = points.iter().find(|p| p.len() != seed.m()) {
        return Err(Error::Dimension { expected: seed.m(), got: p.len() });
    }
    if args.output.is_some() && points.len() != 1 {
        return Err(Error::Precondition("--output takes a single --a".into()));
    }
    let n = seed.n();
    let table = TriangularTable::for_seed(seed.clone())?;
    let mut cache_note = None;

    let results: Vec<Computed> = match args.kind {
        BasisKind::E => points
            .par_iter()
            .map(|a| {
                let element = table.basis().element(a)?;
                let expansion = [(a.clone(), LaurentPoly::one())].into_iter().collect();
                Ok(Computed { a: a.clone(), expansion, element, cache_hit: None })
            })
            .collect::<Result<_>>()?,
        BasisKind::C => {
            let dir = if args.no_cache { None } else { ctx.cache_dir.clone().or_else(default_cache_dir) };
            let mut cache = dir.map(|d| RowCache::open(&d, &seed)).transpose()?;
            if let Some(c) = &cache {
                c.preload(&table);
                cache_note = Some(c.path().to_path_buf());
            }
            let hits: Vec<bool> = points.iter().map(|a| table.cached(a).is_some()).collect();
            let rows: Vec<std::sync::Arc<CRow>> = points.par_iter().map(|a| table.compute(a)).collect::<Result<_>>()?;
            if let Some(c) = &mut cache {
                c.absorb(&table);
                c.save()?;
            }
            rows.into_iter()
                .zip(hits)
                .map(|(row, hit)| Computed {
                    a: row.a.clone(),
                    expansion: row.expansion(),
                    element: row.element.clone(),
                    cache_hit: cache_note.as_ref().map(|_| hit),
                })
                .collect()
        }
    };

    let label = match args.kind {
        BasisKind::E => "E",
        BasisKind::C => "C",
    };
    let mut lines = Vec::new();
    let mut records = Vec::new();
    for r in &results {
        let head = if results.len() == 1 { label.to_string() } else { format!("{label}{}", r.a) };
        lines.push(format!("{head} = {}", r.expansion.display(n)));
        lines.push(format!("  = {}", r.element));
        if let (Some(hit), Some(path)) = (r.cache_hit, &cache_note) {
            let what = if hit { "hit" } else { "miss, stored" };
            lines.push(format!("  cache: {what} ({})", path.display()));
        }
        records.push(json!({
            "a": r.a,
            "expansion": r.expansion,
            "element": element_records(&r.element),
            "cache": r.cache_hit.map(|h| if h { "hit" } else { "miss" }),
        }));
    }
    if let Some(path) = &args.output {
        write_text(path, &element_to_json(&results[0].element))?;
        lines.push(format!("wrote {}", path.display()));
    }
    Ok(Outcome::ok(lines.join("\n"), json!({ "kind": label, "results": records })))
}
