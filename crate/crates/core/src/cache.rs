//! Durable JSON-lines store for exact and heuristic search results.
//!
//! One record per line. Lookups prefer an exact record for the key; a
//! heuristic record is only returned when no exact one exists. Exact records
//! are never rewritten, and a heuristic record is only appended when it beats
//! every heuristic record already stored for its key. Lines that fail to
//! parse are moved to `<path>.quarantine`.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::berge::BergeSearchResult;
use crate::canon::canonicalize;
use crate::error::Result;
use crate::pattern::PatternSpec;
use crate::search::{Mode, SearchProblem, SearchResult};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "MULTITURAN_CACHE";

/// Canonical problem descriptor. Graphs are stored as canonical graph6, so
/// isomorphic inputs share a key. Monochrome pattern lists are sorted; colored
/// lists keep their order because color `i` counts pattern `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub kind: String,
    pub n: usize,
    pub patterns: Vec<String>,
    pub forbidden: String,
    pub mode: Option<Mode>,
    pub k: usize,
    pub engine_version: String,
}

fn canonical_g6(p: &PatternSpec) -> Result<String> {
    Ok(canonicalize(&p.expand()?).form.to_graph6())
}

impl CacheKey {
    pub fn search(p: &SearchProblem) -> Result<Self> {
        let mut patterns = p.patterns.iter().map(canonical_g6).collect::<Result<Vec<_>>>()?;
        if p.mode == Mode::Monochrome {
            patterns.sort();
        }
        Ok(Self {
            kind: match p.mode {
                Mode::Monochrome => "ex",
                Mode::Colored => "cex",
            }
            .into(),
            n: p.n,
            k: patterns.len(),
            patterns,
            forbidden: canonical_g6(&p.forbidden)?,
            mode: Some(p.mode),
            engine_version: ENGINE_VERSION.into(),
        })
    }

    pub fn berge(n: usize, r: usize, f: &PatternSpec) -> Result<Self> {
        Ok(Self {
            kind: "berge".into(),
            n,
            patterns: vec![format!("r={r}")],
            forbidden: canonical_g6(f)?,
            mode: None,
            k: r,
            engine_version: ENGINE_VERSION.into(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    Search(SearchResult),
    Berge(BergeSearchResult),
}

impl Payload {
    pub fn exact(&self) -> bool {
        match self {
            Payload::Search(r) => r.exact,
            Payload::Berge(r) => r.exact,
        }
    }

    fn value(&self) -> BigUint {
        match self {
            Payload::Search(r) => r.value.clone(),
            Payload::Berge(r) => BigUint::from(r.value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub key: CacheKey,
    pub payload: Payload,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl ResultRecord {
    pub fn new(key: CacheKey, payload: Payload) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self { key, payload, timestamp }
    }
}

/// What a put did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PutOutcome {
    Stored,
    /// An equal or better record was already present.
    Kept,
}

#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    writer: Mutex<()>,
}

impl ResultCache {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self {
            path,
            writer: Mutex::new(()),
        })
    }

    /// The cache named by `MULTITURAN_CACHE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::open(p).map(Some),
            _ => Ok(None),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn quarantine_path(&self) -> PathBuf {
        let mut p = self.path.clone().into_os_string();
        p.push(".quarantine");
        p.into()
    }

    /// Reads every record, quarantining lines that do not parse.
    fn load(&self, file: &File) -> Result<Vec<ResultRecord>> {
        let mut good = Vec::new();
        let mut good_lines = Vec::new();
        let mut bad = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<ResultRecord>(&line) {
                Ok(r) => {
                    good.push(r);
                    good_lines.push(line);
                }
                Err(_) => bad.push(line),
            }
        }
        if !bad.is_empty() {
            let mut q = OpenOptions::new().create(true).append(true).open(self.quarantine_path())?;
            for line in &bad {
                writeln!(q, "{line}")?;
            }
            let tmp = self.path.with_extension("rewrite");
            let mut out = File::create(&tmp)?;
            for line in &good_lines {
                writeln!(out, "{line}")?;
            }
            out.sync_all()?;
            fs::rename(&tmp, &self.path)?;
        }
        Ok(good)
    }

    /// Runs `f` on the data file while holding both the in-process mutex and
    /// an exclusive lock on `<path>.lock`, which other processes also take.
    fn locked<T>(&self, f: impl FnOnce(&File) -> Result<T>) -> Result<T> {
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let mut lock_path = self.path.clone().into_os_string();
        lock_path.push(".lock");
        let lock = OpenOptions::new().create(true).truncate(false).write(true).open(lock_path)?;
        lock.lock()?;
        let file = OpenOptions::new().create(true).read(true).append(true).open(&self.path)?;
        let out = f(&file);
        lock.unlock()?;
        out
    }

    /// The exact record for `key` if there is one, else the best heuristic one.
    pub fn get(&self, key: &CacheKey) -> Result<Option<ResultRecord>> {
        self.locked(|file| {
            let records = self.load(file)?;
            Ok(select(records.into_iter().filter(|r| r.key == *key)))
        })
    }

    pub fn put(&self, record: &ResultRecord) -> Result<PutOutcome> {
        self.locked(|file| {
            let records = self.load(file)?;
            let mut same_key = records.iter().filter(|r| r.key == record.key);
            let superseded = if record.payload.exact() {
                same_key.any(|r| r.payload.exact())
            } else {
                let value = record.payload.value();
                same_key.any(|r| r.payload.exact() || r.payload.value() >= value)
            };
            if superseded {
                return Ok(PutOutcome::Kept);
            }
            let mut out = OpenOptions::new().append(true).open(&self.path)?;
            writeln!(out, "{}", serde_json::to_string(record)?)?;
            out.sync_data()?;
            Ok(PutOutcome::Stored)
        })
    }

    /// Number of stored records.
    pub fn len(&self) -> Result<usize> {
        self.locked(|file| Ok(self.load(file)?.len()))
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.len()? == 0)
    }
}

fn select(records: impl Iterator<Item = ResultRecord>) -> Option<ResultRecord> {
    let mut best: Option<ResultRecord> = None;
    for r in records {
        let better = match &best {
            None => true,
            Some(b) => match (r.payload.exact(), b.payload.exact()) {
                (true, false) => true,
                (false, true) | (true, true) => false,
                (false, false) => r.payload.value() > b.payload.value(),
            },
        };
        if better {
            best = Some(r);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{ex_multi, SearchOptions};
    use PatternSpec::*;

    fn record(exact: bool, value: u32) -> ResultRecord {
        let p = SearchProblem::monochrome(5, vec![Clique(2)], Clique(3)).unwrap();
        let mut r = ex_multi(&p, &SearchOptions::default()).unwrap();
        r.exact = exact;
        r.value = BigUint::from(value);
        ResultRecord::new(CacheKey::search(&p).unwrap(), Payload::Search(r))
    }

    #[test]
    fn keys_ignore_labelling_and_monochrome_order() {
        let a = SearchProblem::monochrome(6, vec![Clique(3), Path(3)], Cycle(4)).unwrap();
        let b = SearchProblem::monochrome(6, vec![Path(3), Clique(3)], Cycle(4)).unwrap();
        assert_eq!(CacheKey::search(&a).unwrap(), CacheKey::search(&b).unwrap());
        let a = SearchProblem::colored(6, vec![Clique(3), Path(3)], Cycle(4)).unwrap();
        let b = SearchProblem::colored(6, vec![Path(3), Clique(3)], Cycle(4)).unwrap();
        assert_ne!(CacheKey::search(&a).unwrap(), CacheKey::search(&b).unwrap());
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path().join("c.jsonl")).unwrap();
        let r = record(true, 6);
        assert_eq!(cache.put(&r).unwrap(), PutOutcome::Stored);
        let back = cache.get(&r.key).unwrap().unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), serde_json::to_string(&r).unwrap());
        assert_eq!(cache.put(&r).unwrap(), PutOutcome::Kept);
        assert_eq!(cache.len().unwrap(), 1);
    }

    #[test]
    fn exact_supersedes_heuristic() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path().join("c.jsonl")).unwrap();
        let h = record(false, 5);
        cache.put(&h).unwrap();
        assert!(!cache.get(&h.key).unwrap().unwrap().payload.exact());
        let e = record(true, 6);
        cache.put(&e).unwrap();
        assert_eq!(cache.get(&h.key).unwrap().unwrap(), e);
        assert_eq!(cache.put(&record(false, 7)).unwrap(), PutOutcome::Kept);
        assert_eq!(cache.put(&record(true, 6)).unwrap(), PutOutcome::Kept);
    }

    #[test]
    fn version_mismatch_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path().join("c.jsonl")).unwrap();
        let r = record(true, 6);
        cache.put(&r).unwrap();
        let mut key = r.key.clone();
        key.engine_version = "0.0.0-old".into();
        assert!(cache.get(&key).unwrap().is_none());
    }

    #[test]
    fn corrupt_lines_are_quarantined() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let cache = ResultCache::open(&path).unwrap();
        let r = record(true, 6);
        cache.put(&r).unwrap();
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        writeln!(f, "{{not json").unwrap();
        drop(f);
        assert_eq!(cache.get(&r.key).unwrap().unwrap(), r);
        let q = fs::read_to_string(cache.quarantine_path()).unwrap();
        assert_eq!(q, "{not json\n");
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1);
    }
}
