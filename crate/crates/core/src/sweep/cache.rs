//! In-memory profile cache shared by the rows of a sweep.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::channel::{profile_fingerprint, ProfileProvider};
use crate::diffraction::{FieldProfile, SourceAnnulus};
use crate::error::Result;

type Slot = Arc<OnceLock<Result<Arc<FieldProfile>>>>;

/// Wraps another provider and computes each distinct profile once, even when
/// several threads ask for it at the same time.
pub struct MemoryCache<P> {
    inner: P,
    slots: Mutex<HashMap<[u64; 8], Slot>>,
    misses: AtomicUsize,
}

impl<P: ProfileProvider> MemoryCache<P> {
    pub fn new(inner: P) -> Self {
        Self {
            inner,
            slots: Mutex::new(HashMap::new()),
            misses: AtomicUsize::new(0),
        }
    }

    /// Number of requests passed through to the inner provider.
    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: ProfileProvider> ProfileProvider for MemoryCache<P> {
    fn profile(&self, source: &SourceAnnulus, distance: f64, coverage: f64) -> Result<Arc<FieldProfile>> {
        let key = profile_fingerprint(source, distance, coverage);
        let slot = {
            let mut slots = self.slots.lock().expect("cache lock poisoned");
            Arc::clone(slots.entry(key).or_default())
        };
        slot.get_or_init(|| {
            self.misses.fetch_add(1, Ordering::Relaxed);
            self.inner.profile(source, distance, coverage)
        })
        .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::BeamParams;
    use crate::channel::Uncached;
    use rayon::prelude::*;

    #[test]
    fn computes_each_profile_once() {
        let beam = BeamParams::normalized(1550e-9, 0.1).unwrap();
        let src = SourceAnnulus::cropped(beam, 20e3, 0.1).unwrap();
        let cache = MemoryCache::new(Uncached::default());
        let profiles: Vec<_> = (0..8)
            .into_par_iter()
            .map(|i| cache.profile(&src, 10e3 + (i % 2) as f64 * 1e3, 0.2).unwrap())
            .collect();
        assert_eq!(cache.misses(), 2);
        assert_eq!(cache.len(), 2);
        assert!(Arc::ptr_eq(&profiles[0], &profiles[2]));
    }
}
