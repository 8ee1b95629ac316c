//! Persistent store of field profiles, one file per profile.
//!
//! Files are named by a 128-bit digest of everything that determines the
//! profile. A hit is trusted only after the stored parameters are compared
//! with the request, and an unreadable entry is recomputed and replaced.
//! Writes go to a temporary file in the same directory followed by a rename,
//! so the directory must live on a filesystem with atomic rename; readers
//! never see a partial entry.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::channel::{profile_fingerprint, ProfileProvider};
use crate::diffraction::profile::PROFILE_FORMAT_VERSION;
use crate::diffraction::{FieldProfile, GridPolicy, SourceAnnulus};
use crate::error::{Error, Result};

const EXTENSION: &str = "fprof";

/// Content hash of a profile request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CacheKey(pub [u8; 16]);

impl CacheKey {
    pub fn new(source: &SourceAnnulus, distance: f64, coverage: f64, policy: &GridPolicy) -> Self {
        let mut h = Sha256::new();
        h.update(b"fso-keyrate profile");
        h.update(PROFILE_FORMAT_VERSION.to_le_bytes());
        h.update(policy.version.to_le_bytes());
        h.update(policy.truncation.to_bits().to_le_bytes());
        h.update(policy.nodes_per_cycle.to_bits().to_le_bytes());
        for bits in profile_fingerprint(source, distance, coverage) {
            h.update(bits.to_le_bytes());
        }
        let digest = h.finalize();
        let mut key = [0u8; 16];
        key.copy_from_slice(&digest[..16]);
        Self(key)
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{b:02x}"))
    }
}

/// Summary of one stored entry.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryInfo {
    pub path: PathBuf,
    pub bytes: u64,
    /// `None` when the entry does not parse.
    pub profile: Option<EntrySummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntrySummary {
    pub plane_distance: f64,
    pub inner_radius: f64,
    pub distance: f64,
    pub truncation_radius: f64,
    pub nodes: usize,
}

pub struct DiskCache {
    dir: PathBuf,
    policy: GridPolicy,
    computed: AtomicUsize,
    hits: AtomicUsize,
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        Self::with_policy(dir, GridPolicy::default())
    }

    pub fn with_policy(dir: impl Into<PathBuf>, policy: GridPolicy) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            policy,
            computed: AtomicUsize::new(0),
            hits: AtomicUsize::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Profiles propagated by this handle.
    pub fn computed(&self) -> usize {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{key}.{EXTENSION}"))
    }

    fn load(&self, path: &Path, source: &SourceAnnulus, distance: f64, coverage: f64) -> Result<FieldProfile> {
        let profile = FieldProfile::from_bytes(&fs::read(path)?)?;
        let matches = profile.source() == source
            && profile.distance() == distance
            && profile.policy() == self.policy
            && profile.truncation_radius() >= coverage;
        if !matches {
            return Err(Error::Format("stored parameters differ from the request".into()));
        }
        Ok(profile)
    }

    fn store(&self, path: &Path, profile: &FieldProfile) -> Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&profile.to_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    pub fn entries(&self) -> Result<Vec<EntryInfo>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
                continue;
            }
            let bytes = fs::metadata(&path)?.len();
            let profile = fs::read(&path)
                .ok()
                .and_then(|b| FieldProfile::from_bytes(&b).ok())
                .map(|p| EntrySummary {
                    plane_distance: p.source().plane_distance,
                    inner_radius: p.source().inner_radius,
                    distance: p.distance(),
                    truncation_radius: p.truncation_radius(),
                    nodes: p.nodes().len(),
                });
            out.push(EntryInfo { path, bytes, profile });
        }
        out.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(out)
    }

    /// Deletes every entry and returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.entries()?;
        for e in &entries {
            fs::remove_file(&e.path)?;
        }
        Ok(entries.len())
    }
}

impl ProfileProvider for DiskCache {
    fn profile(&self, source: &SourceAnnulus, distance: f64, coverage: f64) -> Result<Arc<FieldProfile>> {
        let key = CacheKey::new(source, distance, coverage, &self.policy);
        let path = self.path_for(&key);
        if path.exists() {
            match self.load(&path, source, distance, coverage) {
                Ok(p) => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(Arc::new(p));
                }
                Err(e) => log::warn!("cache entry {} unusable ({e}), recomputing", path.display()),
            }
        }
        let profile = FieldProfile::compute(source, distance, coverage, self.policy)?;
        self.computed.fetch_add(1, Ordering::Relaxed);
        self.store(&path, &profile)?;
        Ok(Arc::new(profile))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::BeamParams;

    fn source() -> SourceAnnulus {
        SourceAnnulus::cropped(BeamParams::normalized(1550e-9, 0.1).unwrap(), 20e3, 0.1).unwrap()
    }

    #[test]
    fn key_depends_on_every_field() {
        let p = GridPolicy::default();
        let k = CacheKey::new(&source(), 5e3, 0.2, &p);
        assert_eq!(k, CacheKey::new(&source(), 5e3, 0.2, &p));
        assert_ne!(k, CacheKey::new(&source(), 5e3 + 1e-9, 0.2, &p));
        assert_ne!(k, CacheKey::new(&source(), 5e3, 0.21, &p));
        let bumped = GridPolicy { version: p.version + 1, ..p };
        assert_ne!(k, CacheKey::new(&source(), 5e3, 0.2, &bumped));
        assert_eq!(k.to_string().len(), 32);
    }

    #[test]
    fn warm_cache_skips_propagation() {
        let dir = tempfile::tempdir().unwrap();
        let cold = DiskCache::open(dir.path()).unwrap();
        let a = cold.profile(&source(), 5e3, 0.2).unwrap();
        assert_eq!(cold.computed(), 1);
        let warm = DiskCache::open(dir.path()).unwrap();
        let b = warm.profile(&source(), 5e3, 0.2).unwrap();
        assert_eq!((warm.computed(), warm.hits()), (0, 1));
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn truncated_entry_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::open(dir.path()).unwrap();
        let a = cache.profile(&source(), 5e3, 0.2).unwrap();
        let path = cache.path_for(&CacheKey::new(&source(), 5e3, 0.2, &GridPolicy::default()));
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        let b = cache.profile(&source(), 5e3, 0.2).unwrap();
        assert_eq!(cache.computed(), 2);
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_eq!(fs::read(&path).unwrap(), bytes);
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }
}
