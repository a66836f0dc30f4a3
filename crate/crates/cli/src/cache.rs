//! Fit results on disk, keyed by a hash of the version and every input that
//! affects the result.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "SEMICOUNT_CACHE_DIR";

/// The flag wins over the environment, which wins over the user cache
/// directory. `None` when caching is off or no location is known.
pub fn directory(flag: Option<&Path>, disabled: bool) -> Option<PathBuf> {
    if disabled {
        return None;
    }
    if let Some(p) = flag {
        return Some(p.to_path_buf());
    }
    if let Some(p) = std::env::var_os(ENV_VAR).filter(|p| !p.is_empty()) {
        return Some(PathBuf::from(p));
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME").filter(|p| !p.is_empty()) {
        return Some(PathBuf::from(p).join("semicount"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("semicount"))
}

pub fn key(parts: &[String]) -> String {
    let mut h = Sha256::new();
    h.update(concat!("semicount ", env!("CARGO_PKG_VERSION")).as_bytes());
    for p in parts {
        h.update([0u8]);
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn load(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)?).ok()
    }

    /// Writes through a temporary file so readers never see a partial entry.
    /// Failures only cost a recomputation later, so they are reported and dropped.
    pub fn store(&self, key: &str, contents: &str) {
        let (Some(dir), Some(path)) = (&self.dir, self.path(key)) else { return };
        let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
        let result = fs::create_dir_all(dir).and_then(|_| fs::write(&tmp, contents)).and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = result {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_separate_inputs() {
        let k = |p: &[&str]| key(&p.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        assert_eq!(k(&["fit", "2"]), k(&["fit", "2"]));
        assert_ne!(k(&["fit", "2"]), k(&["fit", "3"]));
        assert_ne!(k(&["fi", "t2"]), k(&["fit", "2"]));
        assert_eq!(k(&["fit"]).len(), 64);
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(Some(dir.path().join("nested")));
        assert_eq!(c.load("abc"), None);
        c.store("abc", "{}");
        assert_eq!(c.load("abc").as_deref(), Some("{}"));
        assert_eq!(Cache::new(None).load("abc"), None);
        assert_eq!(directory(Some(dir.path()), true), None);
    }
}
