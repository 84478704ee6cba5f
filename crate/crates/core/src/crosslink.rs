//! Derivation of the Sindhi-to-English dictionary from English-to-Sindhi
//! records.
//!
//! Every Sindhi word found in an English record's Sindhi glosses gets a
//! Sindhi headword whose English glosses include the English headword and
//! whose `derived_from` set names the English key. Records created this way
//! are `Derived`; a `Manual` record that happens to share the key only has
//! glosses and links appended, never its own fields replaced. When the last
//! link of a `Derived` record is retracted the record goes away.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::changeset::{ChangeLog, ChangeSet};
use crate::lexicon::{FieldViolation, Lexicon, LexiconError};
use crate::record::{DictionaryKind, EntryRecord, NormalizedKey, Provenance};
use crate::repertoire::SindhiRepertoire;
use crate::store::EntryStore;
use crate::text::{display_form, key_form, Side};

const E2S: DictionaryKind = DictionaryKind::EnglishToSindhi;
const S2E: DictionaryKind = DictionaryKind::SindhiToEnglish;

/// Sindhi keys a record links to, with the display text of the first token
/// that produced each key, in order of first appearance.
pub fn reverse_targets(rep: &SindhiRepertoire, source: &EntryRecord) -> Vec<(NormalizedKey, String)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for gloss in &source.sindhi_glosses {
        for token in rep.tokenize(&display_form(gloss)) {
            // tokens made only of marks or tatweel have no key
            if let Some(key) = NormalizedKey::new(&token.text, Side::Sindhi) {
                if seen.insert(key.clone()) {
                    out.push((key, token.text));
                }
            }
        }
    }
    out
}

/// True if some gloss has the English key `source`.
pub fn has_gloss(glosses: &[String], source: &NormalizedKey) -> bool {
    glosses.iter().any(|g| key_form(g, Side::English) == source.as_str())
}

pub(crate) fn validate_targets(rep: &SindhiRepertoire, source: &EntryRecord) -> Result<(), LexiconError> {
    let violations: Vec<FieldViolation> = reverse_targets(rep, source)
        .iter()
        .flat_map(|(_, text)| {
            rep.validate(text).into_iter().map(move |v| FieldViolation {
                field: format!("token:{text}"),
                offset: v.offset,
                codepoint: v.codepoint,
            })
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(LexiconError::RepertoireViolation(violations))
    }
}

fn source_key(source: &EntryRecord) -> Result<NormalizedKey, LexiconError> {
    NormalizedKey::new(&source.headword, Side::English).ok_or(LexiconError::EmptyKey)
}

/// Adds the link `source -> target`, creating a derived record if needed.
fn link<S: EntryStore>(
    lex: &mut Lexicon<S>,
    target: &NormalizedKey,
    display: &str,
    source: &EntryRecord,
    source_key: &NormalizedKey,
    changes: &mut ChangeLog,
) {
    match lex.s2e.get_mut(target.as_str()) {
        Some(record) => {
            let mut changed = false;
            if !has_gloss(&record.english_glosses, source_key) {
                record.english_glosses.push(display_form(&source.headword));
                changed = true;
            }
            changed |= record.derived_from.insert(source_key.clone());
            if changed {
                record.revision += 1;
                changes.updated(S2E, target.clone(), record.clone());
            }
        }
        None => {
            let record = fresh_derived(display, source, source_key);
            lex.s2e.insert(target.as_str().into(), record.clone());
            changes.created(S2E, target.clone(), record);
        }
    }
}

fn fresh_derived(display: &str, source: &EntryRecord, source_key: &NormalizedKey) -> EntryRecord {
    EntryRecord {
        headword: String::from(display),
        pronunciation: String::new(),
        grammar: display_form(&source.grammar),
        sindhi_glosses: Vec::new(),
        english_glosses: vec![display_form(&source.headword)],
        provenance: Provenance::Derived,
        derived_from: BTreeSet::from([source_key.clone()]),
        revision: 1,
    }
}

/// Removes the link `source -> target`; drops the record if it was derived
/// and has no English gloss left.
fn unlink<S: EntryStore>(lex: &mut Lexicon<S>, target: &str, source_key: &NormalizedKey, changes: &mut ChangeLog) {
    let Some(record) = lex.s2e.get_mut(target) else { return };
    let stored = record.clone();
    record.english_glosses.retain(|g| key_form(g, Side::English) != source_key.as_str());
    let removed_link = record.derived_from.remove(source_key);
    if !removed_link && record.english_glosses.len() == stored.english_glosses.len() {
        return;
    }
    let key = NormalizedKey::new(target, Side::Sindhi).expect("stored keys are non-empty");
    if record.provenance == Provenance::Derived && record.english_glosses.is_empty() {
        lex.s2e.remove(target);
        changes.deleted(S2E, key, stored);
    } else {
        record.revision += 1;
        changes.updated(S2E, key, record.clone());
    }
}

/// Brings a linked target in line with an edited source whose token set
/// still contains it.
fn refresh<S: EntryStore>(
    lex: &mut Lexicon<S>,
    target: &NormalizedKey,
    display: &str,
    source: &EntryRecord,
    source_key: &NormalizedKey,
    changes: &mut ChangeLog,
) {
    let Some(record) = lex.s2e.get_mut(target.as_str()) else {
        return link(lex, target, display, source, source_key, changes);
    };
    let sole_source = record.derived_from.len() == 1 && record.derived_from.contains(source_key);
    let mut next = if record.provenance == Provenance::Derived && sole_source {
        // exactly what deriving from scratch would produce
        fresh_derived(display, source, source_key)
    } else {
        let mut next = record.clone();
        let headword = display_form(&source.headword);
        match next.english_glosses.iter().position(|g| key_form(g, Side::English) == source_key.as_str()) {
            Some(i) => next.english_glosses[i] = headword,
            None => next.english_glosses.push(headword),
        }
        next.derived_from.insert(source_key.clone());
        next
    };
    if !next.same_content(record) {
        next.revision = record.revision + 1;
        *record = next;
        changes.updated(S2E, target.clone(), record.clone());
    }
}

/// Links every Sindhi word of `source` back to it.
///
/// Fails without touching the lexicon if a word falls outside the
/// repertoire or the source headword is blank.
pub fn derive<S: EntryStore>(lex: &mut Lexicon<S>, source: &EntryRecord) -> Result<ChangeSet, LexiconError> {
    let key = source_key(source)?;
    validate_targets(&lex.repertoire, source)?;
    let mut changes = ChangeLog::new();
    for (target, display) in reverse_targets(&lex.repertoire, source) {
        link(lex, &target, &display, source, &key, &mut changes);
    }
    Ok(lex.seal(changes))
}

pub(crate) fn retract_into<S: EntryStore>(lex: &mut Lexicon<S>, source_key: &NormalizedKey, changes: &mut ChangeLog) {
    let mut targets: Vec<String> = lex
        .s2e
        .iter()
        .filter(|(_, r)| r.derived_from.contains(source_key))
        .map(|(k, _)| String::from(k))
        .collect();
    let rep = &lex.repertoire;
    targets.sort_by_cached_key(|k| rep.sort_key(k, Side::Sindhi));
    for target in targets {
        unlink(lex, &target, source_key, changes);
    }
}

/// Removes every link from the English key `source_key`. Idempotent.
pub fn retract<S: EntryStore>(lex: &mut Lexicon<S>, source_key: &NormalizedKey) -> ChangeSet {
    let mut changes = ChangeLog::new();
    retract_into(lex, source_key, &mut changes);
    lex.seal(changes)
}

/// Moves the links of `old` (if any) over to `new` with the minimum of
/// churn: words no longer present are unlinked, new words are linked and
/// words present in both are refreshed in place.
pub(crate) fn reconcile_into<S: EntryStore>(
    lex: &mut Lexicon<S>,
    old: Option<&EntryRecord>,
    new_key: &NormalizedKey,
    new: &EntryRecord,
    changes: &mut ChangeLog,
) {
    let new_targets = reverse_targets(&lex.repertoire, new);
    let mut kept: BTreeSet<NormalizedKey> = BTreeSet::new();
    if let Some(old) = old {
        let old_key = NormalizedKey::new(&old.headword, Side::English);
        if old_key.as_ref() == Some(new_key) {
            let wanted: BTreeSet<&NormalizedKey> = new_targets.iter().map(|(k, _)| k).collect();
            for (target, _) in reverse_targets(&lex.repertoire, old) {
                if wanted.contains(&target) {
                    kept.insert(target);
                } else {
                    unlink(lex, target.as_str(), new_key, changes);
                }
            }
        } else if let Some(old_key) = old_key {
            retract_into(lex, &old_key, changes);
        }
    }
    for (target, display) in &new_targets {
        if kept.contains(target) {
            refresh(lex, target, display, new, new_key, changes);
        } else {
            link(lex, target, display, new, new_key, changes);
        }
    }
}

/// Replaces the links of `old` by those of `new` as one change set.
pub fn reconcile<S: EntryStore>(
    lex: &mut Lexicon<S>,
    old: Option<&EntryRecord>,
    new: &EntryRecord,
) -> Result<ChangeSet, LexiconError> {
    let key = source_key(new)?;
    validate_targets(&lex.repertoire, new)?;
    let mut changes = ChangeLog::new();
    reconcile_into(lex, old, &key, new, &mut changes);
    Ok(lex.seal(changes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// A stored key differs from the key form of its headword.
    KeyMismatch,
    /// An English record's Sindhi word has no Sindhi entry.
    MissingReverseEntry,
    /// The Sindhi entry exists but lacks the English headword as a gloss.
    MissingBackGloss,
    /// The Sindhi entry exists but does not list the English key as a source.
    MissingBackLink,
    /// A source key names no English record.
    DanglingSource,
    /// A source key names an English record that no longer contains the word.
    StaleLink,
    /// A derived record without English glosses.
    EmptyDerived,
    /// A derived record without sources.
    DerivedWithoutSource,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::KeyMismatch => "key does not match headword",
            ViolationKind::MissingReverseEntry => "missing Sindhi entry",
            ViolationKind::MissingBackGloss => "missing English gloss",
            ViolationKind::MissingBackLink => "missing source link",
            ViolationKind::DanglingSource => "source does not exist",
            ViolationKind::StaleLink => "source no longer contains the word",
            ViolationKind::EmptyDerived => "derived entry without glosses",
            ViolationKind::DerivedWithoutSource => "derived entry without sources",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConsistencyViolation {
    pub kind: ViolationKind,
    pub dictionary: DictionaryKind,
    pub key: String,
    /// The key on the other side involved, if any.
    pub other: Option<String>,
}

impl fmt::Display for ConsistencyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.dictionary, self.key, self.kind)?;
        if let Some(other) = &self.other {
            write!(f, " ({other})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub violations: Vec<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Full scan of both stores against the derivation invariants.
pub fn check_consistency<S: EntryStore>(lex: &Lexicon<S>) -> ConsistencyReport {
    let mut violations = Vec::new();
    let mut push = |kind, dictionary, key: &str, other: Option<&str>| {
        violations.push(ConsistencyViolation { kind, dictionary, key: key.into(), other: other.map(String::from) });
    };

    for kind in DictionaryKind::ALL {
        for (key, record) in lex.store(kind).iter() {
            if key_form(&record.headword, kind.headword_side()) != key {
                push(ViolationKind::KeyMismatch, kind, key, None);
            }
        }
    }

    let mut targets_of: BTreeMap<&str, BTreeSet<NormalizedKey>> = BTreeMap::new();
    for (key, record) in lex.e2s.iter() {
        let source = NormalizedKey::new(key, Side::English);
        let mut targets = BTreeSet::new();
        for (target, _) in reverse_targets(&lex.repertoire, record) {
            match (lex.s2e.get(target.as_str()), &source) {
                (None, _) => push(ViolationKind::MissingReverseEntry, E2S, key, Some(target.as_str())),
                (Some(rev), Some(source)) => {
                    if !has_gloss(&rev.english_glosses, source) {
                        push(ViolationKind::MissingBackGloss, S2E, target.as_str(), Some(key));
                    }
                    if !rev.derived_from.contains(source) {
                        push(ViolationKind::MissingBackLink, S2E, target.as_str(), Some(key));
                    }
                }
                (Some(_), None) => {}
            }
            targets.insert(target);
        }
        targets_of.insert(key, targets);
    }

    for (key, record) in lex.s2e.iter() {
        for source in &record.derived_from {
            match targets_of.get(source.as_str()) {
                None => push(ViolationKind::DanglingSource, S2E, key, Some(source.as_str())),
                Some(targets) => {
                    if !targets.iter().any(|t| t.as_str() == key) {
                        push(ViolationKind::StaleLink, S2E, key, Some(source.as_str()));
                    }
                }
            }
        }
        if record.provenance == Provenance::Derived {
            if record.english_glosses.is_empty() {
                push(ViolationKind::EmptyDerived, S2E, key, None);
            }
            if record.derived_from.is_empty() {
                push(ViolationKind::DerivedWithoutSource, S2E, key, None);
            }
        }
    }

    violations.sort();
    ConsistencyReport { violations }
}

/// Rebuilds every derived link from the English records and reports the
/// net difference. Manual Sindhi records keep their own fields; derived
/// records are regenerated. Unchanged records keep their revision.
pub fn repair<S: EntryStore>(lex: &mut Lexicon<S>) -> ChangeSet {
    let before: BTreeMap<String, EntryRecord> =
        lex.s2e.iter().map(|(k, r)| (String::from(k), r.clone())).collect();

    let mut rebuilt = S::default();
    for (key, record) in &before {
        if record.provenance == Provenance::Derived {
            continue;
        }
        let mut record = record.clone();
        let sources = core::mem::take(&mut record.derived_from);
        record.english_glosses.retain(|g| {
            let gk = key_form(g, Side::English);
            !sources.iter().any(|s| s.as_str() == gk)
        });
        rebuilt.insert(key.clone(), record);
    }
    lex.s2e = rebuilt;

    let sources: Vec<(NormalizedKey, EntryRecord)> = lex
        .sorted_entries(E2S)
        .into_iter()
        .filter_map(|(k, r)| NormalizedKey::new(k, Side::English).map(|k| (k, r.clone())))
        .collect();
    let mut scratch = ChangeLog::new();
    for (key, source) in &sources {
        for (target, display) in reverse_targets(&lex.repertoire, source) {
            link(lex, &target, &display, source, key, &mut scratch);
        }
    }

    let mut changes = ChangeLog::new();
    let mut keys: Vec<String> = before.keys().cloned().collect();
    keys.extend(lex.s2e.iter().map(|(k, _)| String::from(k)).filter(|k| !before.contains_key(k)));
    let rep = lex.repertoire.clone();
    keys.sort_by_cached_key(|k| rep.sort_key(k, Side::Sindhi));
    for key in keys {
        let nkey = NormalizedKey::new(&key, Side::Sindhi).expect("stored keys are non-empty");
        match (before.get(&key), lex.s2e.get_mut(&key)) {
            (Some(old), None) => changes.deleted(S2E, nkey, old.clone()),
            (None, Some(new)) => {
                new.revision = 1;
                changes.created(S2E, nkey, new.clone());
            }
            (Some(old), Some(new)) => {
                if new.same_content(old) {
                    new.revision = old.revision;
                } else {
                    new.revision = old.revision + 1;
                    changes.updated(S2E, nkey, new.clone());
                }
            }
            (None, None) => {}
        }
    }
    lex.seal(changes)
}
