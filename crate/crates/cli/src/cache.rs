//! Resolutions on disk, one JSON file per key, guarded by advisory locks.

use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::PathBuf;

use preproj_core::certify::{ResolutionKey, ResolutionStore};
use preproj_core::resolution::Resolution;

#[derive(Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    fn path(&self, key: &ResolutionKey) -> PathBuf {
        let module: String = key.module.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
        self.dir.join(format!("{:016x}-{module}-{}-{}.json", key.algebra_hash, key.length, key.field))
    }
}

// Any failure is a cache miss: the cache never changes a result.
impl ResolutionStore for DiskCache {
    fn load(&self, key: &ResolutionKey) -> Option<Resolution> {
        let mut f = File::open(self.path(key)).ok()?;
        f.lock_shared().ok()?;
        let mut s = String::new();
        f.read_to_string(&mut s).ok()?;
        serde_json::from_str(&s).ok()
    }

    fn save(&self, key: &ResolutionKey, res: &Resolution) {
        let Ok(text) = serde_json::to_string(res) else { return };
        let Ok(mut f) = OpenOptions::new().create(true).truncate(false).write(true).open(self.path(key)) else {
            return;
        };
        if f.lock().is_ok() && f.set_len(0).is_ok() {
            let _ = f.write_all(text.as_bytes());
        }
    }
}
