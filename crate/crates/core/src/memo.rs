//! Compute-once memo tables shared across threads.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;

type Slot<V> = Arc<OnceLock<Result<Arc<V>>>>;

/// Each key is computed at most once; concurrent callers for the same key block
/// on the first computation. The outer lock is never held while computing, so
/// recursive lookups of other keys are fine.
pub struct Memo<K, V> {
    slots: Mutex<Option<HashMap<K, Slot<V>>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub const fn new() -> Self {
        Self { slots: Mutex::new(None) }
    }

    pub fn get_or_compute(&self, key: &K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        let slot = {
            let mut guard = self.slots.lock().unwrap_or_else(|e| e.into_inner());
            guard.get_or_insert_with(HashMap::new).entry(key.clone()).or_default().clone()
        };
        slot.get_or_init(|| f().map(Arc::new)).clone()
    }

    pub fn len(&self) -> usize {
        let guard = self.slots.lock().unwrap_or_else(|e| e.into_inner());
        guard.as_ref().map_or(0, |m| m.values().filter(|s| s.get().is_some()).count())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<K: Eq + Hash + Clone, V> Default for Memo<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn computes_once_under_contention() {
        static MEMO: Memo<u32, u64> = Memo::new();
        static CALLS: AtomicUsize = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| {
                    let v = MEMO
                        .get_or_compute(&7, || {
                            CALLS.fetch_add(1, Ordering::SeqCst);
                            std::thread::sleep(std::time::Duration::from_millis(20));
                            Ok(49)
                        })
                        .unwrap();
                    assert_eq!(*v, 49);
                });
            }
        });
        assert_eq!(CALLS.load(Ordering::SeqCst), 1);
        assert_eq!(MEMO.len(), 1);
    }

    #[test]
    fn nested_keys_do_not_deadlock() {
        static MEMO: Memo<u32, u64> = Memo::new();
        fn fib(n: u32) -> u64 {
            if n < 2 {
                return n as u64;
            }
            *MEMO.get_or_compute(&n, || Ok(fib(n - 1) + fib(n - 2))).unwrap()
        }
        assert_eq!(fib(60), 1548008755920);
    }
}
