//! Content-addressed store of JSON payloads keyed by (config hash, module, object id).
//!
//! Each file holds the payload and its SHA-256; a mismatch on load discards the entry.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::VerifierError;

#[derive(Serialize, Deserialize)]
struct Envelope {
    integrity: String,
    payload: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
    config_hash: String,
}

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Cache {
    pub fn open(root: &Path, config_hash: &str) -> Result<Self, VerifierError> {
        let dir = root.join(config_hash);
        fs::create_dir_all(&dir).map_err(|e| VerifierError::Io(dir.clone(), e))?;
        Ok(Cache { root: root.to_path_buf(), config_hash: config_hash.to_string() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// File of an object: <root>/<config hash>/<module>/<sha256(id)>.json
    pub fn path(&self, module: &str, id: &str) -> PathBuf {
        self.root.join(&self.config_hash).join(module).join(format!("{}.json", sha256(id)))
    }

    pub fn store<T: Serialize>(&self, module: &str, id: &str, value: &T) -> Result<(), VerifierError> {
        let path = self.path(module, id);
        let dir = path.parent().expect("cache path has a parent");
        fs::create_dir_all(dir).map_err(|e| VerifierError::Io(dir.to_path_buf(), e))?;
        let payload = serde_json::to_string(value).map_err(|e| VerifierError::Internal(e.to_string()))?;
        let env = Envelope { integrity: sha256(&payload), payload };
        let text = serde_json::to_string(&env).map_err(|e| VerifierError::Internal(e.to_string()))?;
        // write-then-rename so an interrupted run leaves no half-written entry
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| VerifierError::Io(tmp.clone(), e))?;
        fs::rename(&tmp, &path).map_err(|e| VerifierError::Io(path.clone(), e))?;
        Ok(())
    }

    /// The stored value, or `None` if absent, unreadable or corrupted.
    pub fn load<T: DeserializeOwned>(&self, module: &str, id: &str) -> Option<T> {
        let path = self.path(module, id);
        let text = fs::read_to_string(&path).ok()?;
        let env: Envelope = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(_) => {
                let _ = fs::remove_file(&path);
                return None;
            }
        };
        if sha256(&env.payload) != env.integrity {
            let _ = fs::remove_file(&path);
            return None;
        }
        serde_json::from_str(&env.payload).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path(), "abc").unwrap();
        let v: Vec<(String, i64)> = vec![("x".into(), -3), ("y".into(), 7)];
        c.store("kl", "table", &v).unwrap();
        assert_eq!(c.load::<Vec<(String, i64)>>("kl", "table"), Some(v));
        assert_eq!(c.load::<Vec<(String, i64)>>("kl", "other"), None);
    }

    #[test]
    fn corruption_is_discarded() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path(), "abc").unwrap();
        c.store("element", "s0", &42u32).unwrap();
        let p = c.path("element", "s0");
        let text = fs::read_to_string(&p).unwrap().replace("42", "43");
        fs::write(&p, text).unwrap();
        assert_eq!(c.load::<u32>("element", "s0"), None);
        assert!(!p.exists());
        fs::write(&p, "not json").unwrap();
        assert_eq!(c.load::<u32>("element", "s0"), None);
    }

    #[test]
    fn different_config_hash_misses() {
        let dir = tempfile::tempdir().unwrap();
        Cache::open(dir.path(), "one").unwrap().store("kl", "table", &1u8).unwrap();
        assert_eq!(Cache::open(dir.path(), "two").unwrap().load::<u8>("kl", "table"), None);
    }
}
