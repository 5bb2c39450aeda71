use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::HashMap;

/// Per-level hash-consing: equal states share one index.
pub(crate) struct Interner<K> {
    items: Vec<K>,
    index: HashMap<K, u32>,
}

impl<K: Clone + Eq + Hash> Interner<K> {
    pub(crate) fn new() -> Self {
        Interner { items: Vec::new(), index: HashMap::new() }
    }

    pub(crate) fn intern(&mut self, key: K) -> u32 {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.items.len() as u32;
        self.index.insert(key.clone(), i);
        self.items.push(key);
        i
    }

    pub(crate) fn into_items(self) -> Vec<K> {
        self.items
    }
}
