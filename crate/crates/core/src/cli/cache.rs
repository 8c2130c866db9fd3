use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A cached command result; `checksum` is the SHA-256 of the serialized payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub subcommand: String,
    pub params: Value,
    pub checksum: String,
    pub payload: Value,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Replaces strings naming existing files by a digest of their contents.
pub fn canonical_params(v: &Value) -> Value {
    match v {
        Value::String(s) => match std::fs::read(s) {
            Ok(bytes) if Path::new(s).is_file() => Value::String(format!("sha256:{}", digest(&bytes))),
            _ => v.clone(),
        },
        Value::Array(a) => Value::Array(a.iter().map(canonical_params).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), canonical_params(x))).collect()),
        other => other.clone(),
    }
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `CHROMALG_CACHE` if set, otherwise the user cache directory.
    pub fn from_env() -> Option<Cache> {
        let dir = match std::env::var_os("CHROMALG_CACHE") {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => dirs::cache_dir()?.join("chromalg"),
        };
        Some(Cache { dir })
    }

    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    pub fn key(subcommand: &str, params: &Value) -> String {
        // serde_json maps are key-sorted, so this serialization is canonical
        let text = serde_json::to_string(&(VERSION, subcommand, params)).expect("serializable");
        digest(text.as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The cached payload, if present, from this version, and intact.
    pub fn get(&self, subcommand: &str, params: &Value) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(&Self::key(subcommand, params))).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        let payload_text = serde_json::to_string(&entry.payload).ok()?;
        let fresh = entry.version == VERSION && entry.subcommand == subcommand && &entry.params == params;
        (fresh && entry.checksum == digest(payload_text.as_bytes())).then_some(entry.payload)
    }

    /// Writes through a temporary file in the cache directory, then renames it into place.
    pub fn put(&self, subcommand: &str, params: &Value, payload: &Value) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let payload_text = serde_json::to_string(payload)?;
        let entry = CacheEntry {
            version: VERSION.into(),
            subcommand: subcommand.into(),
            params: params.clone(),
            checksum: digest(payload_text.as_bytes()),
            payload: payload.clone(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.persist(self.path(&Self::key(subcommand, params))).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let params = json!({"k": 4});
        assert_eq!(cache.get("zeta denom", &params), None);
        cache.put("zeta denom", &params, &json!({"denominator": "120"})).unwrap();
        assert_eq!(cache.get("zeta denom", &params), Some(json!({"denominator": "120"})));
        assert_eq!(cache.get("zeta table", &params), None);
        let path = cache.path(&Cache::key("zeta denom", &params));
        let tampered = std::fs::read_to_string(&path).unwrap().replace("120", "121");
        std::fs::write(&path, tampered).unwrap();
        assert_eq!(cache.get("zeta denom", &params), None);
    }
}
