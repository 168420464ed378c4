//! JSON files: seeds, torus elements, `E`-expansions, and an on-disk cache
//! of triangular-basis rows.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ebasis::EExpansion;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::lusztig::{CRow, TriangularTable};
use crate::qtorus::{LatticeVector, SkewForm, TorusElement};
use crate::seed::{QuantumSeed, SeedFile};

/// One term of an element file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub exp: LatticeVector,
    pub coeff: LaurentPoly,
}

fn parse_err(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn element_records(x: &TorusElement) -> Vec<ElementRecord> {
    x.terms().map(|(e, c)| ElementRecord { exp: e.clone(), coeff: c.clone() }).collect()
}

/// Rebuilds an element over `form`, checking exponent lengths.
pub fn element_from_records(form: &Arc<SkewForm>, records: Vec<ElementRecord>) -> Result<TorusElement> {
    TorusElement::from_terms(form, records.into_iter().map(|r| (r.exp, r.coeff)))
}

pub fn element_to_json(x: &TorusElement) -> String {
    serde_json::to_string_pretty(&element_records(x)).expect("element records serialize")
}

pub fn element_from_json(form: &Arc<SkewForm>, text: &str) -> Result<TorusElement> {
    let records = serde_json::from_str(text).map_err(|e| parse_err("element file", e))?;
    element_from_records(form, records)
}

pub fn expansion_to_json(x: &EExpansion) -> String {
    serde_json::to_string_pretty(x).expect("expansions serialize")
}

pub fn expansion_from_json(text: &str) -> Result<EExpansion> {
    serde_json::from_str(text).map_err(|e| parse_err("expansion file", e))
}

pub fn seed_to_json(seed: &QuantumSeed) -> String {
    serde_json::to_string_pretty(&seed.to_file()).expect("seed files serialize")
}

/// Parses and validates a seed file.
pub fn seed_from_json(text: &str) -> Result<QuantumSeed> {
    let file: SeedFile = serde_json::from_str(text).map_err(|e| parse_err("seed file", e))?;
    QuantumSeed::from_file(&file)
}

pub fn read_seed(path: &Path) -> Result<QuantumSeed> {
    seed_from_json(&read_text(path)?)
}

/// Parses a seed file without validating it.
pub fn read_seed_file(path: &Path) -> Result<SeedFile> {
    serde_json::from_str(&read_text(path)?).map_err(|e| parse_err(&path.display().to_string(), e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Hex SHA-256 of the canonical seed file. Any change to `B~`, `Lambda`,
/// `d` or the order changes the hash.
pub fn seed_hash(seed: &QuantumSeed) -> String {
    let canonical = serde_json::to_vec(&seed.to_file()).expect("seed files serialize");
    Sha256::digest(canonical).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    seed_hash: String,
    rows: Vec<CachedRow>,
}

#[derive(Clone, Serialize, Deserialize)]
struct CachedRow {
    a: LatticeVector,
    p: EExpansion,
    element: Vec<ElementRecord>,
}

/// Computed `C`-rows of one seed, stored at `<dir>/<seed hash>.json`.
///
/// A file whose header hash does not match the seed, or that fails to
/// parse, is treated as empty and overwritten on the next save.
pub struct RowCache {
    path: PathBuf,
    hash: String,
    form: Arc<SkewForm>,
    rows: BTreeMap<LatticeVector, CachedRow>,
    stale: bool,
    dirty: bool,
}

impl RowCache {
    pub fn open(dir: &Path, seed: &QuantumSeed) -> Result<Self> {
        let hash = seed_hash(seed);
        let path = dir.join(format!("{hash}.json"));
        let mut cache = Self {
            path,
            hash,
            form: seed.form().clone(),
            rows: BTreeMap::new(),
            stale: false,
            dirty: false,
        };
        if let Ok(text) = fs::read_to_string(&cache.path) {
            match serde_json::from_str::<CacheFile>(&text) {
                Ok(file) if file.seed_hash == cache.hash => {
                    let n = seed.m();
                    cache.rows = file
                        .rows
                        .into_iter()
                        .filter(|r| r.a.len() == n && r.element.iter().all(|t| t.exp.len() == n))
                        .map(|r| (r.a.clone(), r))
                        .collect();
                }
                _ => cache.stale = true,
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn seed_hash(&self) -> &str {
        &self.hash
    }

    /// Whether an existing file was ignored on open.
    pub fn was_stale(&self) -> bool {
        self.stale
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, a: &LatticeVector) -> Option<CRow> {
        let r = self.rows.get(a)?;
        let element = element_from_records(&self.form, r.element.clone()).ok()?;
        Some(CRow { a: r.a.clone(), p: r.p.clone(), element })
    }

    pub fn put(&mut self, row: &CRow) {
        let rec = CachedRow { a: row.a.clone(), p: row.p.clone(), element: element_records(&row.element) };
        self.rows.insert(row.a.clone(), rec);
        self.dirty = true;
    }

    /// Loads every cached row into `table`.
    pub fn preload(&self, table: &TriangularTable) {
        for a in self.rows.keys() {
            if let Some(row) = self.get(a) {
                table.insert(row);
            }
        }
    }

    /// Records every row `table` has computed.
    pub fn absorb(&mut self, table: &TriangularTable) {
        for row in table.rows() {
            if !self.rows.contains_key(&row.a) {
                self.put(&row);
            }
        }
    }

    /// Writes the file if anything changed, via a temporary file and rename.
    pub fn save(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        let file = CacheFile { seed_hash: self.hash.clone(), rows: self.rows.values().cloned().collect() };
        let text = serde_json::to_string(&file).expect("cache rows serialize");
        let tmp = self.path.with_extension("json.tmp");
        fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, &self.path).map_err(|e| io_err(&self.path, e))?;
        self.dirty = false;
        self.stale = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::a11_seed;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::new(x.iter().copied())
    }

    #[test]
    fn seed_round_trip() {
        let s = a11_seed();
        let text = seed_to_json(&s);
        assert!(text.contains("\"Lambda\""));
        let back = seed_from_json(&text).unwrap();
        assert_eq!(seed_to_json(&back), text);
        assert_eq!(seed_hash(&back), seed_hash(&s));
        assert_ne!(seed_hash(&s.mutate(0).unwrap()), seed_hash(&s));
    }

    #[test]
    fn bad_seed_reports_position() {
        let err = seed_from_json("{\n \"m\": 2,\n \"n\": }").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = seed_from_json(r#"{"m":2,"n":2,"B":[[0,1],[1,0]],"Lambda":[[0,-1],[1,0]],"d":[1,1],"order":[1,2]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidSeed(_)));
    }

    #[test]
    fn element_and_expansion_round_trip() {
        let s = a11_seed();
        let x = &(&s.x(0) + &s.x(1).scale_v(-3)) * &s.x(1);
        let text = element_to_json(&x);
        assert!(text.contains("\"exp\"") && text.contains("\"coeff\""));
        assert_eq!(element_from_json(s.form(), &text).unwrap(), x);
        assert!(element_from_json(s.form(), r#"[{"exp":[1],"coeff":"1"}]"#).is_err());

        let mut e = EExpansion::new();
        e.add(lv(&[-1, -1]), &LaurentPoly::one());
        e.add(lv(&[1, 1]), &-LaurentPoly::v_pow(4));
        assert_eq!(expansion_from_json(&expansion_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn cache_persists_and_rejects_stale() {
        let dir = std::env::temp_dir().join(format!("qca-io-test-{}", std::process::id()));
        let s = a11_seed();
        let table = TriangularTable::for_seed(s.clone()).unwrap();
        let a = lv(&[-1, -1]);
        table.compute(&a).unwrap();
        let mut cache = RowCache::open(&dir, &s).unwrap();
        assert!(cache.is_empty());
        cache.absorb(&table);
        cache.save().unwrap();

        let cache = RowCache::open(&dir, &s).unwrap();
        assert_eq!(cache.get(&a).unwrap(), *table.cached(&a).unwrap());
        let fresh = TriangularTable::for_seed(s.clone()).unwrap();
        cache.preload(&fresh);
        assert!(fresh.cached(&a).is_some());

        let text = fs::read_to_string(cache.path()).unwrap();
        fs::write(cache.path(), text.replacen(cache.seed_hash(), "0000", 1)).unwrap();
        let reopened = RowCache::open(&dir, &s).unwrap();
        assert!(reopened.was_stale() && reopened.is_empty());
        fs::remove_dir_all(&dir).unwrap();
    }
}
