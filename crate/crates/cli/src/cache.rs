//! Content-addressed result cache on disk.
//!
//! One JSON file per (query, backend), named by the SHA-256 of the
//! label-free query key. Files are written to a temporary name in the same
//! directory and renamed into place.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;
use verlinde::verlinde::{Backend, VerlindeQuery, VerlindeResult};

pub const CACHE_DIR_VAR: &str = "VERLINDE_CACHE_DIR";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    version: String,
    key: String,
    backend: String,
    value: String,
    ell_integral: bool,
    exceptional_case: bool,
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    /// `$VERLINDE_CACHE_DIR`, else the user cache directory.
    pub fn default_dir() -> PathBuf {
        if let Some(dir) = std::env::var_os(CACHE_DIR_VAR) {
            return dir.into();
        }
        if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
            return Path::new(&xdg).join("verlinde");
        }
        if let Some(home) = std::env::var_os("HOME") {
            return Path::new(&home).join(".cache").join("verlinde");
        }
        std::env::temp_dir().join("verlinde-cache")
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, key: &str, backend: Backend) -> PathBuf {
        let digest = Sha256::digest(format!("{backend}\n{key}").as_bytes());
        self.dir.join(format!("{}.json", hex::encode(digest)))
    }

    /// A stored result, or `None` if absent, unreadable, or written by another version.
    pub fn get(&self, q: &VerlindeQuery, backend: Backend) -> Option<VerlindeResult> {
        let key = q.value_key();
        let text = fs::read_to_string(self.entry_path(&key, backend)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.version != VERSION || entry.key != key || entry.backend != backend.to_string() {
            return None;
        }
        Some(VerlindeResult {
            value: entry.value.parse::<BigInt>().ok()?,
            backend,
            ell_integral: entry.ell_integral,
            exceptional_case: entry.exceptional_case,
            float_residual: None,
            approx: None,
        })
    }

    pub fn put(&self, q: &VerlindeQuery, result: &VerlindeResult) -> io::Result<()> {
        let key = q.value_key();
        let entry = CacheEntry {
            version: VERSION.to_string(),
            key: key.clone(),
            backend: result.backend.to_string(),
            value: result.value.to_string(),
            ell_integral: result.ell_integral,
            exceptional_case: result.exceptional_case,
        };
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.persist(self.entry_path(&key, result.backend))
            .map_err(|e| e.error)?;
        Ok(())
    }
}
