use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::text::{key_form, Side};

/// Which of the two dictionaries a record lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DictionaryKind {
    EnglishToSindhi,
    SindhiToEnglish,
}

impl DictionaryKind {
    pub const ALL: [DictionaryKind; 2] = [DictionaryKind::EnglishToSindhi, DictionaryKind::SindhiToEnglish];

    /// Language of the headwords filed in this dictionary.
    pub fn headword_side(self) -> Side {
        match self {
            DictionaryKind::EnglishToSindhi => Side::English,
            DictionaryKind::SindhiToEnglish => Side::Sindhi,
        }
    }

    /// Short code used on the command line, in URLs and in files.
    pub fn code(self) -> &'static str {
        match self {
            DictionaryKind::EnglishToSindhi => "e2s",
            DictionaryKind::SindhiToEnglish => "s2e",
        }
    }
}

impl fmt::Display for DictionaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownKind;

impl fmt::Display for UnknownKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("dictionary kind must be e2s or s2e")
    }
}

impl core::error::Error for UnknownKind {}

impl FromStr for DictionaryKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e2s" => Ok(DictionaryKind::EnglishToSindhi),
            "s2e" => Ok(DictionaryKind::SindhiToEnglish),
            _ => Err(UnknownKind),
        }
    }
}

/// Whether a record was typed in by a person or generated from the English
/// dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Provenance {
    #[default]
    Manual,
    Derived,
}

impl Provenance {
    pub fn code(self) -> &'static str {
        match self {
            Provenance::Manual => "manual",
            Provenance::Derived => "derived",
        }
    }
}

impl FromStr for Provenance {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "manual" => Ok(Provenance::Manual),
            "derived" => Ok(Provenance::Derived),
            _ => Err(()),
        }
    }
}

/// A lookup key: Key-normalized text for one side. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedKey {
    text: String,
    side: Side,
}

impl NormalizedKey {
    /// Normalizes `raw`; `None` if nothing usable is left.
    pub fn new(raw: &str, side: Side) -> Option<Self> {
        let text = key_form(raw, side);
        (!text.is_empty()).then_some(Self { text, side })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

impl fmt::Display for NormalizedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// One dictionary entry.
///
/// `headword`, `pronunciation`, `grammar`, `sindhi_glosses` and
/// `english_glosses` are the user-facing fields. For an English-to-Sindhi
/// record the Sindhi glosses are the meaning; for a Sindhi-to-English record
/// the English glosses are. `provenance`, `derived_from` and `revision` are
/// bookkeeping maintained by the lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EntryRecord {
    pub headword: String,
    pub pronunciation: String,
    pub grammar: String,
    pub sindhi_glosses: Vec<String>,
    pub english_glosses: Vec<String>,
    pub provenance: Provenance,
    /// English headword keys this record was generated from.
    pub derived_from: BTreeSet<NormalizedKey>,
    pub revision: u64,
}

impl EntryRecord {
    pub fn new(headword: impl Into<String>) -> Self {
        Self { headword: headword.into(), ..Self::default() }
    }

    pub fn with_pronunciation(mut self, pronunciation: impl Into<String>) -> Self {
        self.pronunciation = pronunciation.into();
        self
    }

    pub fn with_grammar(mut self, grammar: impl Into<String>) -> Self {
        self.grammar = grammar.into();
        self
    }

    pub fn with_sindhi_glosses<I, T>(mut self, glosses: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        self.sindhi_glosses = glosses.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_english_glosses<I, T>(mut self, glosses: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        self.english_glosses = glosses.into_iter().map(Into::into).collect();
        self
    }

    /// The glosses that carry this record's meaning in `kind`.
    pub fn meaning(&self, kind: DictionaryKind) -> &[String] {
        match kind {
            DictionaryKind::EnglishToSindhi => &self.sindhi_glosses,
            DictionaryKind::SindhiToEnglish => &self.english_glosses,
        }
    }

    /// Field-wise equality ignoring `revision`.
    pub fn same_content(&self, other: &EntryRecord) -> bool {
        self.headword == other.headword
            && self.pronunciation == other.pronunciation
            && self.grammar == other.grammar
            && self.sindhi_glosses == other.sindhi_glosses
            && self.english_glosses == other.english_glosses
            && self.provenance == other.provenance
            && self.derived_from == other.derived_from
    }
}
