//! The twin English-to-Sindhi / Sindhi-to-English stores.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::changeset::{ChangeLog, ChangeSet};
use crate::crosslink::{self, ConsistencyReport};
use crate::record::{DictionaryKind, EntryRecord, NormalizedKey, Provenance};
use crate::repertoire::SindhiRepertoire;
use crate::store::{EntryStore, HashStore};
use crate::text::{display_form, key_form};

/// A repertoire violation located in a named field of a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldViolation {
    /// `headword`, `sindhi_glosses[2]`, ...
    pub field: String,
    pub offset: usize,
    pub codepoint: char,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    /// The headword has nothing left after key normalization.
    EmptyKey,
    /// Sindhi text contains codepoints outside the repertoire.
    RepertoireViolation(Vec<FieldViolation>),
    NotFound,
    /// A Sindhi entry cannot be deleted while English entries still derive it.
    Linked { key: NormalizedKey, sources: Vec<NormalizedKey> },
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::EmptyKey => f.write_str("headword is empty after normalization"),
            LexiconError::RepertoireViolation(v) => {
                f.write_str("text outside the Sindhi repertoire:")?;
                for item in v {
                    write!(f, " {}@{}=U+{:04X}", item.field, item.offset, u32::from(item.codepoint))?;
                }
                Ok(())
            }
            LexiconError::NotFound => f.write_str("no such entry"),
            LexiconError::Linked { key, sources } => {
                write!(f, "{key} is still derived from {} English entr", sources.len())?;
                f.write_str(if sources.len() == 1 { "y" } else { "ies" })
            }
        }
    }
}

impl core::error::Error for LexiconError {}

/// One line of a word list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordListing {
    pub headword: String,
    pub key: NormalizedKey,
    pub provenance: Provenance,
}

/// Both stores, sorted in collation order. Two lexicons with equal snapshots
/// are observably identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub e2s: Vec<(String, EntryRecord)>,
    pub s2e: Vec<(String, EntryRecord)>,
}

#[derive(Debug, Clone)]
pub struct Lexicon<S: EntryStore = HashStore> {
    pub(crate) e2s: S,
    pub(crate) s2e: S,
    pub(crate) repertoire: SindhiRepertoire,
    dirty: bool,
    sequence: u64,
}

impl<S: EntryStore> Default for Lexicon<S> {
    fn default() -> Self {
        Self::with_repertoire(SindhiRepertoire::shipped())
    }
}

impl<S: EntryStore> Lexicon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_repertoire(repertoire: SindhiRepertoire) -> Self {
        Self { e2s: S::default(), s2e: S::default(), repertoire, dirty: false, sequence: 0 }
    }

    pub fn repertoire(&self) -> &SindhiRepertoire {
        &self.repertoire
    }

    pub fn store(&self, kind: DictionaryKind) -> &S {
        match kind {
            DictionaryKind::EnglishToSindhi => &self.e2s,
            DictionaryKind::SindhiToEnglish => &self.s2e,
        }
    }

    pub(crate) fn store_mut(&mut self, kind: DictionaryKind) -> &mut S {
        match kind {
            DictionaryKind::EnglishToSindhi => &mut self.e2s,
            DictionaryKind::SindhiToEnglish => &mut self.s2e,
        }
    }

    pub fn len(&self, kind: DictionaryKind) -> usize {
        self.store(kind).len()
    }

    pub fn is_empty(&self) -> bool {
        self.e2s.is_empty() && self.s2e.is_empty()
    }

    /// True when mutations happened since the last [`mark_clean`](Self::mark_clean).
    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn mark_clean(&mut self) {
        self.dirty = false;
    }

    /// Turns accumulated changes into the result of one mutation.
    pub(crate) fn seal(&mut self, changes: ChangeLog) -> ChangeSet {
        if changes.is_empty() {
            return changes.finish(0);
        }
        self.dirty = true;
        self.sequence += 1;
        changes.finish(self.sequence)
    }

    /// Looks up `raw_word` after key normalization.
    pub fn get(&self, kind: DictionaryKind, raw_word: &str) -> Option<&EntryRecord> {
        let key = key_form(raw_word, kind.headword_side());
        self.store(kind).get(&key)
    }

    /// Inserts or replaces a record and updates derived Sindhi entries.
    ///
    /// Text fields are display-normalized, empty and repeated glosses are
    /// dropped, and `provenance`, `derived_from` and `revision` are set by
    /// the lexicon regardless of what the caller passed.
    pub fn put(&mut self, kind: DictionaryKind, record: EntryRecord) -> Result<ChangeSet, LexiconError> {
        let (key, mut record) = self.prepare(kind, record)?;
        let old = self.store(kind).get(key.as_str()).cloned();
        record.provenance = Provenance::Manual;
        record.revision = old.as_ref().map_or(1, |o| o.revision + 1);

        let mut changes = ChangeLog::new();
        let note = |changes: &mut ChangeLog, record: &EntryRecord| {
            if record.revision == 1 {
                changes.created(kind, key.clone(), record.clone());
            } else {
                changes.updated(kind, key.clone(), record.clone());
            }
        };
        match kind {
            DictionaryKind::EnglishToSindhi => {
                record.derived_from.clear();
                crosslink::validate_targets(&self.repertoire, &record)?;
                self.e2s.insert(key.clone().into_string(), record.clone());
                note(&mut changes, &record);
                crosslink::reconcile_into(self, old.as_ref(), &key, &record, &mut changes);
            }
            DictionaryKind::SindhiToEnglish => {
                // links from English entries survive a manual edit
                record.derived_from = old.map(|o| o.derived_from).unwrap_or_default();
                for source in &record.derived_from {
                    if let Some(english) = self.e2s.get(source.as_str()) {
                        if !crosslink::has_gloss(&record.english_glosses, source) {
                            record.english_glosses.push(english.headword.clone());
                        }
                    }
                }
                self.s2e.insert(key.clone().into_string(), record.clone());
                note(&mut changes, &record);
            }
        }
        Ok(self.seal(changes))
    }

    /// Removes an entry. Deleting an English entry retracts what it derived;
    /// a Sindhi entry still derived from English entries is refused.
    pub fn delete(&mut self, kind: DictionaryKind, raw_word: &str) -> Result<ChangeSet, LexiconError> {
        let key = NormalizedKey::new(raw_word, kind.headword_side()).ok_or(LexiconError::NotFound)?;
        let existing = self.store(kind).get(key.as_str()).ok_or(LexiconError::NotFound)?;
        if kind == DictionaryKind::SindhiToEnglish && !existing.derived_from.is_empty() {
            return Err(LexiconError::Linked { key, sources: existing.derived_from.iter().cloned().collect() });
        }
        let removed = self.store_mut(kind).remove(key.as_str()).expect("present");
        let mut changes = ChangeLog::new();
        changes.deleted(kind, key.clone(), removed);
        if kind == DictionaryKind::EnglishToSindhi {
            crosslink::retract_into(self, &key, &mut changes);
        }
        Ok(self.seal(changes))
    }

    /// Headwords whose key starts with the key form of `prefix`, in
    /// collation order, skipping `offset` and returning at most `limit`.
    pub fn list_words(&self, kind: DictionaryKind, prefix: &str, offset: usize, limit: usize) -> Vec<WordListing> {
        self.matching(kind, prefix)
            .into_iter()
            .skip(offset)
            .take(limit)
            .map(|(key, record)| WordListing {
                headword: record.headword.clone(),
                key: NormalizedKey::new(key, kind.headword_side()).expect("stored keys are non-empty"),
                provenance: record.provenance,
            })
            .collect()
    }

    /// Number of headwords [`list_words`](Self::list_words) can page through.
    pub fn count_words(&self, kind: DictionaryKind, prefix: &str) -> usize {
        let prefix = key_form(prefix, kind.headword_side());
        self.store(kind).iter().filter(|(k, _)| k.starts_with(prefix.as_str())).count()
    }

    fn matching(&self, kind: DictionaryKind, prefix: &str) -> Vec<(&str, &EntryRecord)> {
        let side = kind.headword_side();
        let prefix = key_form(prefix, side);
        let mut hits: Vec<(&str, &EntryRecord)> =
            self.store(kind).iter().filter(|(k, _)| k.starts_with(prefix.as_str())).collect();
        hits.sort_by_cached_key(|(k, _)| self.repertoire.sort_key(k, side));
        hits
    }

    /// Every record of one store in collation order.
    pub fn sorted_entries(&self, kind: DictionaryKind) -> Vec<(&str, &EntryRecord)> {
        self.matching(kind, "")
    }

    pub fn snapshot(&self) -> Snapshot {
        let own = |kind| {
            self.sorted_entries(kind).into_iter().map(|(k, r)| (String::from(k), r.clone())).collect()
        };
        Snapshot { e2s: own(DictionaryKind::EnglishToSindhi), s2e: own(DictionaryKind::SindhiToEnglish) }
    }

    /// Stores a record verbatim under `key`, bypassing normalization,
    /// validation and derivation. For loaders that restore a saved state.
    pub fn insert_unchecked(&mut self, kind: DictionaryKind, key: NormalizedKey, record: EntryRecord) -> Option<EntryRecord> {
        self.store_mut(kind).insert(key.into_string(), record)
    }

    pub fn check_consistency(&self) -> ConsistencyReport {
        crosslink::check_consistency(self)
    }

    fn prepare(&self, kind: DictionaryKind, record: EntryRecord) -> Result<(NormalizedKey, EntryRecord), LexiconError> {
        let record = sanitize(record);
        let key = NormalizedKey::new(&record.headword, kind.headword_side()).ok_or(LexiconError::EmptyKey)?;
        let mut violations = Vec::new();
        let mut check = |field: String, text: &str| {
            violations.extend(self.repertoire.validate(text).into_iter().map(|v| FieldViolation {
                field: field.clone(),
                offset: v.offset,
                codepoint: v.codepoint,
            }));
        };
        if kind == DictionaryKind::SindhiToEnglish {
            check(String::from("headword"), &record.headword);
        }
        for (i, gloss) in record.sindhi_glosses.iter().enumerate() {
            check(format!("sindhi_glosses[{i}]"), gloss);
        }
        if violations.is_empty() {
            Ok((key, record))
        } else {
            Err(LexiconError::RepertoireViolation(violations))
        }
    }
}

/// Display-normalizes every text field and drops empty or repeated glosses.
pub fn sanitize(mut record: EntryRecord) -> EntryRecord {
    record.headword = display_form(&record.headword);
    record.pronunciation = display_form(&record.pronunciation);
    record.grammar = display_form(&record.grammar);
    record.sindhi_glosses = clean_glosses(&record.sindhi_glosses);
    record.english_glosses = clean_glosses(&record.english_glosses);
    record
}

fn clean_glosses(glosses: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(glosses.len());
    for gloss in glosses.iter().map(|g| display_form(g)) {
        if !gloss.is_empty() && !out.contains(&gloss) {
            out.push(gloss);
        }
    }
    out
}
