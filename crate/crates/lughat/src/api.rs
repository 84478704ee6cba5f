//! JSON shapes shared by the store file, the command line and the HTTP
//! service. Both front ends serialize through [`encode`], so the same query
//! produces the same bytes everywhere.

use lughat_core::{
    ChangeSet, DictionaryKind, EntryRecord, EntryStore, FieldViolation, KeyboardLayout, Lexicon, LexiconError,
    NormalizedKey, Provenance, SindhiRepertoire, WordListing,
};
use serde::{Deserialize, Serialize};

/// One record on the wire and in the store file. Field order is fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApiEntry {
    pub kind: String,
    pub key: String,
    pub headword: String,
    pub pronunciation: String,
    pub grammar: String,
    pub sindhi_glosses: Vec<String>,
    pub english_glosses: Vec<String>,
    pub provenance: String,
    pub derived_from: Vec<String>,
    pub revision: u64,
}

impl ApiEntry {
    pub fn new(kind: DictionaryKind, key: &NormalizedKey, record: &EntryRecord) -> Self {
        Self {
            kind: kind.code().into(),
            key: key.as_str().into(),
            headword: record.headword.clone(),
            pronunciation: record.pronunciation.clone(),
            grammar: record.grammar.clone(),
            sindhi_glosses: record.sindhi_glosses.clone(),
            english_glosses: record.english_glosses.clone(),
            provenance: record.provenance.code().into(),
            derived_from: record.derived_from.iter().map(|k| k.as_str().to_owned()).collect(),
            revision: record.revision,
        }
    }

    /// Builds from a stored record; the key is recomputed from the headword.
    pub fn from_record(kind: DictionaryKind, record: &EntryRecord) -> Option<Self> {
        NormalizedKey::new(&record.headword, kind.headword_side()).map(|key| Self::new(kind, &key, record))
    }

    /// Splits back into its parts. Fails on an unknown kind or provenance, or
    /// a key that is not in normalized form.
    pub fn into_parts(self) -> Result<(DictionaryKind, NormalizedKey, EntryRecord), String> {
        let kind: DictionaryKind = self.kind.parse().map_err(|_| format!("unknown kind {:?}", self.kind))?;
        let key = NormalizedKey::new(&self.key, kind.headword_side())
            .filter(|k| k.as_str() == self.key)
            .ok_or_else(|| format!("key {:?} is not normalized", self.key))?;
        let provenance: Provenance =
            self.provenance.parse().map_err(|_| format!("unknown provenance {:?}", self.provenance))?;
        let mut derived_from = std::collections::BTreeSet::new();
        for source in &self.derived_from {
            let k = NormalizedKey::new(source, lughat_core::Side::English)
                .filter(|k| k.as_str() == source)
                .ok_or_else(|| format!("source key {source:?} is not normalized"))?;
            if !derived_from.insert(k) {
                return Err(format!("source key {source:?} repeated"));
            }
        }
        let record = EntryRecord {
            headword: self.headword,
            pronunciation: self.pronunciation,
            grammar: self.grammar,
            sindhi_glosses: self.sindhi_glosses,
            english_glosses: self.english_glosses,
            provenance,
            derived_from,
            revision: self.revision,
        };
        Ok((kind, key, record))
    }
}

/// Body accepted when writing a record. Bookkeeping fields are accepted so a
/// client can send back what it read, but the lexicon sets them itself.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
pub struct EntryInput {
    pub kind: Option<String>,
    pub key: Option<String>,
    pub headword: String,
    pub pronunciation: String,
    pub grammar: String,
    pub sindhi_glosses: Vec<String>,
    pub english_glosses: Vec<String>,
    pub provenance: Option<String>,
    pub derived_from: Option<Vec<String>>,
    pub revision: Option<u64>,
}

impl EntryInput {
    pub fn into_record(self) -> EntryRecord {
        EntryRecord::new(self.headword)
            .with_pronunciation(self.pronunciation)
            .with_grammar(self.grammar)
            .with_sindhi_glosses(self.sindhi_glosses)
            .with_english_glosses(self.english_glosses)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordItem {
    pub headword: String,
    pub key: String,
    pub provenance: String,
}

impl From<WordListing> for WordItem {
    fn from(w: WordListing) -> Self {
        Self { headword: w.headword, key: w.key.into_string(), provenance: w.provenance.code().into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordList {
    pub kind: String,
    pub prefix: String,
    pub offset: usize,
    pub limit: usize,
    pub total: usize,
    pub items: Vec<WordItem>,
}

pub const DEFAULT_LIMIT: usize = 50;
pub const MAX_LIMIT: usize = 1000;

/// One page of headwords. Both front ends answer list queries through this
/// function so equal queries produce equal bytes.
pub fn word_list<S: EntryStore>(
    lex: &Lexicon<S>,
    kind: DictionaryKind,
    prefix: &str,
    offset: usize,
    limit: Option<usize>,
) -> WordList {
    let limit = limit.unwrap_or(DEFAULT_LIMIT).min(MAX_LIMIT);
    WordList {
        kind: kind.code().into(),
        prefix: prefix.into(),
        offset,
        limit,
        total: lex.count_words(kind, prefix),
        items: lex.list_words(kind, prefix, offset, limit).into_iter().map(WordItem::from).collect(),
    }
}

pub fn tokens(repertoire: &SindhiRepertoire, text: &str) -> Tokens {
    Tokens { tokens: repertoire.tokenize(text).into_iter().map(|t| t.text).collect() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub entries_e2s: usize,
    pub entries_s2e: usize,
    pub derived_s2e: usize,
    pub manual_s2e: usize,
}

impl Stats {
    pub fn of<S: EntryStore>(lex: &Lexicon<S>) -> Self {
        let s2e = lex.store(DictionaryKind::SindhiToEnglish);
        let derived_s2e = s2e.iter().filter(|(_, r)| r.provenance == Provenance::Derived).count();
        Self {
            entries_e2s: lex.len(DictionaryKind::EnglishToSindhi),
            entries_s2e: s2e.len(),
            derived_s2e,
            manual_s2e: s2e.len() - derived_s2e,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChangeSetJson {
    pub session_tag: u64,
    pub created: Vec<ApiEntry>,
    pub updated: Vec<ApiEntry>,
    pub deleted: Vec<ApiEntry>,
}

impl From<&ChangeSet> for ChangeSetJson {
    fn from(cs: &ChangeSet) -> Self {
        let conv = |list: &[lughat_core::Change]| list.iter().map(|c| ApiEntry::new(c.kind, &c.key, &c.record)).collect();
        Self { session_tag: cs.session_tag, created: conv(&cs.created), updated: conv(&cs.updated), deleted: conv(&cs.deleted) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tokens {
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TokenizeRequest {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Health {
    pub status: &'static str,
    pub entries_e2s: usize,
    pub entries_s2e: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyJson {
    pub label: String,
    pub codepoints: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyboardJson {
    pub version: u32,
    pub rows: Vec<Vec<KeyJson>>,
}

impl From<&KeyboardLayout> for KeyboardJson {
    fn from(layout: &KeyboardLayout) -> Self {
        Self {
            version: layout.version,
            rows: layout
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|k| KeyJson { label: k.label.clone(), codepoints: k.codepoints.iter().map(|&c| c as u32).collect() })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationJson {
    pub field: String,
    pub offset: usize,
    pub codepoint: u32,
}

impl From<&FieldViolation> for ViolationJson {
    fn from(v: &FieldViolation) -> Self {
        Self { field: v.field.clone(), offset: v.offset, codepoint: v.codepoint as u32 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<String>,
}

impl ErrorBody {
    pub fn new(error: &'static str, message: impl Into<String>) -> Self {
        Self { error, message: message.into(), violations: Vec::new(), sources: Vec::new() }
    }
}

impl From<&LexiconError> for ErrorBody {
    fn from(err: &LexiconError) -> Self {
        let mut body = ErrorBody::new(error_code(err), err.to_string());
        match err {
            LexiconError::RepertoireViolation(v) => body.violations = v.iter().map(ViolationJson::from).collect(),
            LexiconError::Linked { sources, .. } => body.sources = sources.iter().map(|k| k.as_str().to_owned()).collect(),
            _ => {}
        }
        body
    }
}

pub fn error_code(err: &LexiconError) -> &'static str {
    match err {
        LexiconError::EmptyKey => "empty_key",
        LexiconError::RepertoireViolation(_) => "repertoire_violation",
        LexiconError::NotFound => "not_found",
        LexiconError::Linked { .. } => "linked",
    }
}

/// Compact JSON followed by a newline.
pub fn encode<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string(value).expect("API types always serialize");
    out.push('\n');
    out
}
