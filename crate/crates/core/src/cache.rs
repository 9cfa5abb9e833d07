//! JSON-lines store for refined zeros.
//!
//! One [`ZeroRecord`] per line, appended. Loading skips lines that fail to
//! parse and collapses records sharing `(q, index, t rounded to 1e-9)`.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::zeros::ZeroRecord;

pub const CACHE_FILE: &str = "zeros.jsonl";

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "DIRICHLET_CACHE_DIR";

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(CACHE_FILE)
}

pub fn cache_store(dir: &Path, records: &[ZeroRecord]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(cache_path(dir))?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r)?);
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())?;
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CacheLoad {
    pub records: Vec<ZeroRecord>,
    /// Lines that could not be parsed.
    pub warnings: usize,
}

fn key(r: &ZeroRecord) -> (u64, u64, i64) {
    (r.q, r.index, (r.t * 1e9).round() as i64)
}

pub fn cache_load(dir: &Path) -> Result<CacheLoad> {
    let path = cache_path(dir);
    if !path.exists() {
        return Ok(CacheLoad::default());
    }
    let reader = BufReader::new(fs::File::open(path)?);
    let mut seen = BTreeMap::new();
    let mut warnings = 0;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ZeroRecord>(&line) {
            Ok(r) => {
                seen.entry(key(&r)).or_insert(r);
            }
            Err(_) => warnings += 1,
        }
    }
    Ok(CacheLoad {
        records: seen.into_values().collect(),
        warnings,
    })
}
