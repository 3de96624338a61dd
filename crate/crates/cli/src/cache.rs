//! On-disk memoization of exact objects, keyed by kind, topology and basis.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;
pub const ENV_VAR: &str = "WP_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    V,
    T,
    P,
    Tgnp,
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Key {
    pub kind: Kind,
    pub g: u32,
    pub n: u32,
    pub p: Option<u32>,
    pub basis: Option<String>,
    pub version: u32,
}

impl Key {
    pub fn new(kind: Kind, g: u32, n: u32) -> Self {
        Self { kind, g, n, p: None, basis: None, version: FORMAT_VERSION }
    }

    pub fn with_p(mut self, p: u32) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_basis(mut self, basis: &str) -> Self {
        self.basis = Some(basis.to_string());
        self
    }

    fn file_name(&self) -> String {
        let kind = serde_json::to_value(self.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let p = self.p.map_or("x".to_string(), |p| p.to_string());
        let basis = self.basis.as_deref().unwrap_or("x");
        format!("{kind}-g{}-n{}-p{p}-{basis}.json", self.g, self.n)
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: Key,
    payload: String,
    checksum: String,
}

pub fn checksum(payload: &str) -> String {
    let digest = Sha256::digest(payload.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    #[cfg(test)]
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    /// `$WP_CACHE_DIR`, else `$XDG_CACHE_HOME/wpvol`, else `$HOME/.cache/wpvol`.
    pub fn from_env() -> Self {
        let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = var(ENV_VAR)
            .or_else(|| var("XDG_CACHE_HOME").map(|d| d.join("wpvol")))
            .or_else(|| var("HOME").map(|d| d.join(".cache").join("wpvol")));
        Self { dir }
    }

    /// Cached value for `key`, or `compute()` stored atomically. Entries with another format
    /// version, a different key or a bad checksum are ignored and overwritten.
    pub fn get_or_compute<T, E>(&self, key: &Key, compute: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(key.file_name());
        if let Some(v) = read_entry(&path, key) {
            return Ok(v);
        }
        let value = compute()?;
        if let Err(e) = write_entry(dir, &path, key, &value) {
            eprintln!("warning: cache write to {} failed: {e}", path.display());
        }
        Ok(value)
    }
}

fn read_entry<T: DeserializeOwned>(path: &Path, key: &Key) -> Option<T> {
    let text = fs::read_to_string(path).ok()?;
    let entry: Entry = serde_json::from_str(&text).ok()?;
    if &entry.key != key || entry.checksum != checksum(&entry.payload) {
        return None;
    }
    serde_json::from_str(&entry.payload).ok()
}

fn write_entry<T: Serialize>(dir: &Path, path: &Path, key: &Key, value: &T) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let payload = serde_json::to_string(value)?;
    let entry = Entry { key: key.clone(), checksum: checksum(&payload), payload };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = Key::new(Kind::V, 1, 1).with_basis("wp");
        let mut calls = 0;
        let mut get = |cache: &Cache| {
            cache
                .get_or_compute(&key, || {
                    calls += 1;
                    Ok::<_, ()>(vec![1u32, 2, 3])
                })
                .unwrap()
        };
        assert_eq!(get(&cache), vec![1, 2, 3]);
        assert_eq!(get(&cache), vec![1, 2, 3]);
        let path = dir.path().join(key.file_name());
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("[1,2,3]", "[1,2,4]")).unwrap();
        assert_eq!(get(&cache), vec![1, 2, 3]);
        let mut stale: Entry = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        stale.key.version = FORMAT_VERSION + 1;
        fs::write(&path, serde_json::to_string(&stale).unwrap()).unwrap();
        assert_eq!(get(&cache), vec![1, 2, 3]);
        assert_eq!(calls, 3);
    }

    #[test]
    fn checksum_is_sha256() {
        assert_eq!(checksum(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
