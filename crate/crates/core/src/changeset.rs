use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::record::{DictionaryKind, EntryRecord, NormalizedKey};

/// One touched record with its state after the mutation (or, for deletions,
/// the last state it had).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Change {
    pub kind: DictionaryKind,
    pub key: NormalizedKey,
    pub record: EntryRecord,
}

/// Net effect of one mutation on both dictionaries, including reverse
/// entries created or changed by derivation.
///
/// A key appears at most once per list and never in both `created` and
/// `deleted`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChangeSet {
    pub created: Vec<Change>,
    pub updated: Vec<Change>,
    pub deleted: Vec<Change>,
    /// Sequence number of the mutation within the lexicon that produced it.
    pub session_tag: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bucket {
    Created,
    Updated,
    Deleted,
}

impl ChangeSet {
    pub fn is_empty(&self) -> bool {
        self.created.is_empty() && self.updated.is_empty() && self.deleted.is_empty()
    }

    pub fn len(&self) -> usize {
        self.created.len() + self.updated.len() + self.deleted.len()
    }

    /// All changes touching `kind`, in created/updated/deleted order.
    pub fn touching(&self, kind: DictionaryKind) -> impl Iterator<Item = &Change> {
        self.created.iter().chain(&self.updated).chain(&self.deleted).filter(move |c| c.kind == kind)
    }

    /// Folds a later change set into this one.
    pub fn absorb(&mut self, later: ChangeSet) {
        let tag = later.session_tag.max(self.session_tag);
        let mut log = ChangeLog::from(core::mem::take(self));
        log.absorb(later);
        *self = log.finish(tag);
    }
}

/// Accumulates changes with net-effect merging: created then deleted
/// cancels, deleted then created becomes updated, and the last snapshot of
/// a record wins. Lists keep the order in which keys were first touched.
#[derive(Debug, Default)]
pub struct ChangeLog {
    slots: Vec<Option<(Bucket, Change)>>,
    index: HashMap<(DictionaryKind, NormalizedKey), usize>,
}

impl ChangeLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }

    fn note(&mut self, incoming: Bucket, change: Change) {
        let id = (change.kind, change.key.clone());
        match self.index.get(&id).copied() {
            None => {
                self.index.insert(id, self.slots.len());
                self.slots.push(Some((incoming, change)));
            }
            Some(slot) => {
                let earlier = self.slots[slot].as_ref().map(|(b, _)| *b);
                let merged = match (earlier, incoming) {
                    (None, later) => Some(later),
                    (Some(Bucket::Created), Bucket::Deleted) => None,
                    (Some(Bucket::Created), _) => Some(Bucket::Created),
                    (Some(Bucket::Deleted), Bucket::Created) => Some(Bucket::Updated),
                    (Some(_), later) => Some(later),
                };
                self.slots[slot] = merged.map(|bucket| (bucket, change));
            }
        }
    }

    pub fn created(&mut self, kind: DictionaryKind, key: NormalizedKey, record: EntryRecord) {
        self.note(Bucket::Created, Change { kind, key, record });
    }

    pub fn updated(&mut self, kind: DictionaryKind, key: NormalizedKey, record: EntryRecord) {
        self.note(Bucket::Updated, Change { kind, key, record });
    }

    pub fn deleted(&mut self, kind: DictionaryKind, key: NormalizedKey, record: EntryRecord) {
        self.note(Bucket::Deleted, Change { kind, key, record });
    }

    pub fn absorb(&mut self, later: ChangeSet) {
        for c in later.created {
            self.note(Bucket::Created, c);
        }
        for c in later.updated {
            self.note(Bucket::Updated, c);
        }
        for c in later.deleted {
            self.note(Bucket::Deleted, c);
        }
    }

    pub fn finish(self, session_tag: u64) -> ChangeSet {
        let mut out = ChangeSet { session_tag, ..ChangeSet::default() };
        for (bucket, change) in self.slots.into_iter().flatten() {
            match bucket {
                Bucket::Created => out.created.push(change),
                Bucket::Updated => out.updated.push(change),
                Bucket::Deleted => out.deleted.push(change),
            }
        }
        out
    }
}

impl From<ChangeSet> for ChangeLog {
    fn from(set: ChangeSet) -> Self {
        let mut log = ChangeLog::new();
        log.absorb(set);
        log
    }
}
