//! A content-addressed on-disk cache for expensive intermediate results.
//!
//! Each entry is a small JSON document holding its own key and a checksum
//! of the payload. Entries that fail to parse or verify are discarded with a
//! warning and recomputed; they are never trusted. Writes go to a temporary
//! file that is renamed into place, so concurrent processes sharing a
//! directory see either a complete entry or none.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    op: String,
    checksum: String,
    payload: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheCounters {
    pub hits: u64,
    pub misses: u64,
    pub discarded: u64,
    pub validated: u64,
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    validate: bool,
    counters: Mutex<CacheCounters>,
    warnings: Mutex<Vec<String>>,
}

static TMP_SEQ: AtomicU64 = AtomicU64::new(0);

fn hex_digest(data: &[u8]) -> String {
    Sha256::digest(data)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Content key for an operation on canonical inputs.
pub fn cache_key(op: &str, parts: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(op.as_bytes());
    for p in parts {
        h.update([0u8]);
        h.update(p.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Cache {
            dir,
            validate: false,
            counters: Mutex::new(CacheCounters::default()),
            warnings: Mutex::new(Vec::new()),
        })
    }

    /// In validate mode every hit is recomputed and compared by the caller.
    pub fn with_validation(mut self, on: bool) -> Self {
        self.validate = on;
        self
    }

    pub fn validating(&self) -> bool {
        self.validate
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn warn(&self, msg: String) {
        self.warnings.lock().unwrap().push(msg);
    }

    pub fn get(&self, op: &str, key: &str) -> Option<String> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => {
                self.counters.lock().unwrap().misses += 1;
                return None;
            }
        };
        let ok = serde_json::from_str::<Entry>(&text).ok().filter(|e| {
            e.key == key && e.op == op && e.checksum == hex_digest(e.payload.as_bytes())
        });
        match ok {
            Some(e) => {
                self.counters.lock().unwrap().hits += 1;
                Some(e.payload)
            }
            None => {
                self.warn(format!(
                    "discarding corrupt cache entry {}",
                    path.display()
                ));
                let _ = fs::remove_file(&path);
                let mut c = self.counters.lock().unwrap();
                c.discarded += 1;
                c.misses += 1;
                None
            }
        }
    }

    pub fn put(&self, op: &str, key: &str, payload: &str) -> Result<()> {
        let entry = Entry {
            key: key.to_string(),
            op: op.to_string(),
            checksum: hex_digest(payload.as_bytes()),
            payload: payload.to_string(),
        };
        let tmp = self.dir.join(format!(
            ".{key}.{}.{}.tmp",
            std::process::id(),
            TMP_SEQ.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    pub(crate) fn note_validated(&self) {
        self.counters.lock().unwrap().validated += 1;
    }

    pub fn counters(&self) -> CacheCounters {
        *self.counters.lock().unwrap()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().unwrap().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let key = cache_key("fiber", &["Q[x,y]", "x^2"]);
        assert_eq!(cache.get("fiber", &key), None);
        cache.put("fiber", &key, "t1*t3-t2^2").unwrap();
        assert_eq!(cache.get("fiber", &key).as_deref(), Some("t1*t3-t2^2"));
        // the op tag is part of the identity
        assert_eq!(cache.get("other", &key), None);

        cache.put("fiber", &key, "payload").unwrap();
        let path = dir.path().join(format!("{key}.json"));
        let poisoned = fs::read_to_string(&path).unwrap().replace("payload", "poison!");
        fs::write(&path, poisoned).unwrap();
        assert_eq!(cache.get("fiber", &key), None);
        assert!(!path.exists());
        assert_eq!(cache.warnings().len(), 2);

        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.get("fiber", &key), None);
        let c = cache.counters();
        assert_eq!((c.hits, c.discarded), (1, 3));
    }

    #[test]
    fn keys_separate_parts() {
        assert_ne!(cache_key("a", &["bc"]), cache_key("a", &["b", "c"]));
        assert_eq!(cache_key("a", &["b"]).len(), 64);
    }
}
