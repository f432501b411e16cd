use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

/// Memo table where each key is computed at most once, even under
/// concurrent requests; other keys are not blocked meanwhile.
pub(crate) struct OnceCache<K, V> {
    slots: Mutex<HashMap<K, Arc<OnceLock<V>>>>,
}

impl<K: Hash + Eq, V: Clone> OnceCache<K, V> {
    pub(crate) fn new() -> Self {
        Self { slots: Mutex::new(HashMap::new()) }
    }

    pub(crate) fn get_or_init(&self, key: K, init: impl FnOnce() -> V) -> V {
        let slot = self.slots.lock().expect("cache lock poisoned").entry(key).or_default().clone();
        slot.get_or_init(init).clone()
    }
}
