//! `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys use the long
//! flag spelling (`threads`, `cache-dir`, `shift`, ...). Flags given on the
//! command line take precedence over the file.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const KEYS: &[&str] = &[
    "format",
    "output",
    "threads",
    "cache-dir",
    "shift",
    "bernoulli",
    "truncation",
    "tolerance",
    "candidate-threshold",
    "accept-residual",
    "width-tolerance",
];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected `key = value`", lineno + 1);
            };
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key `{key}`", lineno + 1);
            }
            entries.insert(key, value.trim().trim_matches('"').to_string());
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// `flag` if set, else the parsed config value for `key`.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
        }
    }
}
