//! Content-addressed cache of interval reports.

use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Bumping this invalidates every entry.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Cache {
    dir: PathBuf,
}

/// Exclusive lock on the cache directory, released on drop.
struct Lock(File);

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = self.0.unlock();
    }
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    /// Hash of the schema version and the `key=value` fields in order.
    pub fn key(fields: &[(&str, String)]) -> String {
        let mut h = Sha256::new();
        h.update(format!("schema={SCHEMA_VERSION}\n"));
        for (k, v) in fields {
            h.update(format!("{k}={v}\n"));
        }
        hex::encode(h.finalize())
    }

    fn lock(&self) -> Result<Lock> {
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))
            .context("opening cache lock")?;
        f.lock().context("locking cache")?;
        Ok(Lock(f))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Result<Option<Value>> {
        let _g = self.lock()?;
        let p = self.path(key);
        if !p.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&p)?;
        Ok(Some(serde_json::from_str(&text).with_context(|| format!("corrupt entry {}", p.display()))?))
    }

    pub fn put(&self, key: &str, v: &Value) -> Result<()> {
        let _g = self.lock()?;
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_string(v)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    pub fn get_or_insert(&self, key: &str, f: impl FnOnce() -> Result<Value>) -> Result<Value> {
        if let Some(v) = self.get(key)? {
            return Ok(v);
        }
        let v = f()?;
        self.put(key, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_stability() {
        let dir = std::env::temp_dir().join(format!("crystgar-cache-test-{}", std::process::id()));
        let c = Cache::open(&dir).unwrap();
        let k = Cache::key(&[("type", "G2".into()), ("window", "2".into())]);
        assert_eq!(k, Cache::key(&[("type", "G2".into()), ("window", "2".into())]));
        assert_ne!(k, Cache::key(&[("type", "G2".into()), ("window", "3".into())]));
        assert_eq!(c.get(&k).unwrap(), None);
        let v = serde_json::json!({"a": "1/2"});
        let mut calls = 0;
        for _ in 0..2 {
            let got = c
                .get_or_insert(&k, || {
                    calls += 1;
                    Ok(v.clone())
                })
                .unwrap();
            assert_eq!(got, v);
        }
        assert_eq!(calls, 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
