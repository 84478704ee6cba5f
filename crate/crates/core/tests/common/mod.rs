#![allow(dead_code)]

pub mod oracle;

use std::fmt::Write;

use lughat_core::{DictionaryKind, EntryRecord, EntryStore, Lexicon, SindhiRepertoire};
use proptest::prelude::*;

pub const E2S: DictionaryKind = DictionaryKind::EnglishToSindhi;
pub const S2E: DictionaryKind = DictionaryKind::SindhiToEnglish;

/// Distinct Sindhi words built from the shipped alphabet. Word `k` starts
/// with the letter pair at index `37k mod m²`, a bijection on pairs, so
/// words never repeat; odd `k` get a third letter. Supports up to m² words.
pub fn sindhi_pool(n: usize) -> Vec<String> {
    let rep = SindhiRepertoire::shipped();
    let letters = rep.letters();
    let m = letters.len();
    assert!(n <= m * m, "pool larger than the number of letter pairs");
    (0..n)
        .map(|k| {
            let pair = (k * 37) % (m * m);
            let (a, b) = (pair / m, pair % m);
            let mut word: String = [letters[a], letters[b]].into_iter().collect();
            if k % 2 == 1 {
                word.push(letters[(a + b + k) % m]);
            }
            word
        })
        .collect()
}

pub fn english_pool(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("word{i:03}")).collect()
}

const SEPARATORS: [&str; 5] = [" ", "، ", "،", "؛ ", " . "];

#[derive(Debug, Clone)]
pub enum Op {
    PutEnglish { word: usize, upper: bool, glosses: Vec<Vec<(usize, u8)>>, grammar: u8, sep: usize },
    DeleteEnglish { word: usize, upper: bool },
    PutSindhi { word: usize, english: Vec<usize>, grammar: u8 },
    DeleteSindhi { word: usize },
}

pub struct Pools {
    pub english: Vec<String>,
    pub sindhi: Vec<String>,
}

impl Pools {
    pub fn new(english: usize, sindhi: usize) -> Self {
        Self { english: english_pool(english), sindhi: sindhi_pool(sindhi) }
    }

    fn english_word(&self, word: usize, upper: bool) -> String {
        let w = &self.english[word % self.english.len()];
        if upper {
            w.to_uppercase()
        } else {
            w.clone()
        }
    }

    /// Sindhi word, optionally decorated with a diacritic or tatweel that the
    /// key form removes.
    fn sindhi_word(&self, word: usize, variant: u8) -> String {
        let w = &self.sindhi[word % self.sindhi.len()];
        let mut chars: Vec<char> = w.chars().collect();
        match variant % 4 {
            1 => chars.insert(1, '\u{064E}'),
            2 => chars.insert(1, '\u{0640}'),
            _ => {}
        }
        chars.into_iter().collect()
    }

    pub fn record(&self, op: &Op) -> Option<(DictionaryKind, EntryRecord)> {
        match op {
            Op::PutEnglish { word, upper, glosses, grammar, sep } => {
                let glosses: Vec<String> = glosses
                    .iter()
                    .map(|words| {
                        words
                            .iter()
                            .map(|&(w, v)| self.sindhi_word(w, v))
                            .collect::<Vec<_>>()
                            .join(SEPARATORS[sep % SEPARATORS.len()])
                    })
                    .collect();
                Some((
                    E2S,
                    EntryRecord::new(self.english_word(*word, *upper))
                        .with_grammar(["noun", "verb", "adj"][*grammar as usize % 3])
                        .with_sindhi_glosses(glosses),
                ))
            }
            Op::PutSindhi { word, english, grammar } => Some((
                S2E,
                EntryRecord::new(self.sindhi_word(*word, 0))
                    .with_grammar(["اسم", "فعل"][*grammar as usize % 2])
                    .with_english_glosses(english.iter().map(|&e| self.english_word(e, false))),
            )),
            _ => None,
        }
    }

    /// Applies `op` and returns a printable account of its result.
    pub fn apply<S: EntryStore>(&self, lex: &mut Lexicon<S>, op: &Op) -> String {
        match op {
            Op::PutEnglish { .. } | Op::PutSindhi { .. } => {
                let (kind, record) = self.record(op).unwrap();
                format!("{:?}", lex.put(kind, record))
            }
            Op::DeleteEnglish { word, upper } => format!("{:?}", lex.delete(E2S, &self.english_word(*word, *upper))),
            Op::DeleteSindhi { word } => format!("{:?}", lex.delete(S2E, &self.sindhi_word(*word, 0))),
        }
    }
}

pub fn op_strategy(english: usize, sindhi: usize) -> impl Strategy<Value = Op> {
    let gloss = prop::collection::vec((0..sindhi, any::<u8>()), 1..4);
    prop_oneof![
        6 => (0..english, any::<bool>(), prop::collection::vec(gloss, 0..4), any::<u8>(), 0..SEPARATORS.len())
            .prop_map(|(word, upper, glosses, grammar, sep)| Op::PutEnglish { word, upper, glosses, grammar, sep }),
        3 => (0..english, any::<bool>()).prop_map(|(word, upper)| Op::DeleteEnglish { word, upper }),
        1 => (0..sindhi, prop::collection::vec(0..english, 0..3), any::<u8>())
            .prop_map(|(word, english, grammar)| Op::PutSindhi { word, english, grammar }),
        1 => (0..sindhi).prop_map(|word| Op::DeleteSindhi { word }),
    ]
}

/// Everything a client could observe after the ops: each result, then the
/// full listings, lookups of every pool word and the consistency report.
pub fn transcript<S: EntryStore>(pools: &Pools, ops: &[Op]) -> String {
    let mut lex = Lexicon::<S>::new();
    let mut out = String::new();
    for op in ops {
        writeln!(out, "{}", pools.apply(&mut lex, op)).unwrap();
    }
    for kind in [E2S, S2E] {
        writeln!(out, "{:?}", lex.list_words(kind, "", 0, usize::MAX)).unwrap();
        for k in [1, 3, 7] {
            for offset in (0..lex.len(kind) + k).step_by(k) {
                writeln!(out, "{:?}", lex.list_words(kind, "", offset, k)).unwrap();
            }
        }
    }
    for w in &pools.english {
        writeln!(out, "{:?}", lex.get(E2S, w)).unwrap();
        writeln!(out, "{:?}", lex.list_words(E2S, &w[..5], 0, 4)).unwrap();
    }
    for w in &pools.sindhi {
        writeln!(out, "{:?}", lex.get(S2E, w)).unwrap();
        let first: String = w.chars().take(1).collect();
        writeln!(out, "{:?}", lex.list_words(S2E, &first, 0, 4)).unwrap();
    }
    writeln!(out, "{:?}", lex.check_consistency()).unwrap();
    out
}
