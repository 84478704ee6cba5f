//! Backing maps for one side of the lexicon.
//!
//! Lookups only ever go through [`EntryStore`]; nothing observable may depend
//! on which implementation is used. Iteration order is unspecified, so
//! callers that expose results sort them first.

use alloc::string::String;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::DefaultHashBuilder;
use hashbrown::HashMap;

use crate::record::EntryRecord;

/// Bucket count reserved up front; sized for a dictionary of tens of
/// thousands of headwords.
pub const INITIAL_CAPACITY: usize = 65_536;

pub trait EntryStore: Clone + Default {
    fn get(&self, key: &str) -> Option<&EntryRecord>;
    fn get_mut(&mut self, key: &str) -> Option<&mut EntryRecord>;
    fn insert(&mut self, key: String, record: EntryRecord) -> Option<EntryRecord>;
    fn remove(&mut self, key: &str) -> Option<EntryRecord>;
    fn len(&self) -> usize;
    fn iter(&self) -> impl Iterator<Item = (&str, &EntryRecord)>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn contains(&self, key: &str) -> bool {
        self.get(key).is_some()
    }
}

/// Hash-table store.
#[derive(Debug, Clone)]
pub struct HashStore<S = DefaultHashBuilder> {
    map: HashMap<String, EntryRecord, S>,
}

impl<S: BuildHasher + Default> Default for HashStore<S> {
    fn default() -> Self {
        Self { map: HashMap::with_capacity_and_hasher(INITIAL_CAPACITY, S::default()) }
    }
}

impl<S: BuildHasher + Default + Clone> EntryStore for HashStore<S> {
    fn get(&self, key: &str) -> Option<&EntryRecord> {
        self.map.get(key)
    }

    fn get_mut(&mut self, key: &str) -> Option<&mut EntryRecord> {
        self.map.get_mut(key)
    }

    fn insert(&mut self, key: String, record: EntryRecord) -> Option<EntryRecord> {
        self.map.insert(key, record)
    }

    fn remove(&mut self, key: &str) -> Option<EntryRecord> {
        self.map.remove(key)
    }

    fn len(&self) -> usize {
        self.map.len()
    }

    fn iter(&self) -> impl Iterator<Item = (&str, &EntryRecord)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Sorted association list. Slow on insert; kept as a reference
/// implementation for checking that the hash store changes nothing but speed.
#[derive(Debug, Clone, Default)]
pub struct SortedStore {
    entries: Vec<(String, EntryRecord)>,
}

impl SortedStore {
    fn position(&self, key: &str) -> Result<usize, usize> {
        self.entries.binary_search_by(|(k, _)| k.as_str().cmp(key))
    }
}

impl EntryStore for SortedStore {
    fn get(&self, key: &str) -> Option<&EntryRecord> {
        self.position(key).ok().map(|i| &self.entries[i].1)
    }

    fn get_mut(&mut self, key: &str) -> Option<&mut EntryRecord> {
        self.position(key).ok().map(|i| &mut self.entries[i].1)
    }

    fn insert(&mut self, key: String, record: EntryRecord) -> Option<EntryRecord> {
        match self.position(&key) {
            Ok(i) => Some(core::mem::replace(&mut self.entries[i].1, record)),
            Err(i) => {
                self.entries.insert(i, (key, record));
                None
            }
        }
    }

    fn remove(&mut self, key: &str) -> Option<EntryRecord> {
        self.position(key).ok().map(|i| self.entries.remove(i).1)
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    fn iter(&self) -> impl Iterator<Item = (&str, &EntryRecord)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}
