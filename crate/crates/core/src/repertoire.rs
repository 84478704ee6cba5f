//! The data-driven Sindhi alphabet: which codepoints may appear in Sindhi
//! fields, how they sort, and which of them separate words.
//!
//! The table is read from a small line-oriented file:
//!
//! ```text
//! # comment (anywhere on a line)
//! version 1
//! letter 0628 2        # codepoint in hex, collation rank
//! extra 0020           # permitted non-letter
//! delimiter 060C       # splits meanings into words
//! ```
//!
//! Exactly one `version` line is required. Letter ranks must be unique and
//! contiguous from zero, and a codepoint may be listed at most once across
//! `letter` and `extra` lines. `delimiter` lines are independent of the
//! other two.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::text::Side;
use crate::tokenize::{tokenize_with, Delimiters, Token};

/// The repertoire shipped with the crate.
pub const SHIPPED_REPERTOIRE: &str = include_str!("../data/sindhi.repertoire");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SindhiRepertoire {
    version: u32,
    letters: Vec<char>,
    extras: BTreeSet<char>,
    delimiters: Delimiters,
    ranks: BTreeMap<char, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepertoireError {
    pub line: usize,
    pub kind: RepertoireErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepertoireErrorKind {
    UnknownDirective,
    MalformedLine,
    BadCodepoint,
    BadNumber,
    MissingVersion,
    DuplicateVersion,
    DuplicateCodepoint(char),
    /// Ranks are not exactly `0..n`.
    RankGap(u32),
}

impl fmt::Display for RepertoireError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "repertoire line {}: ", self.line)?;
        match &self.kind {
            RepertoireErrorKind::UnknownDirective => f.write_str("unknown directive"),
            RepertoireErrorKind::MalformedLine => f.write_str("wrong number of fields"),
            RepertoireErrorKind::BadCodepoint => f.write_str("invalid codepoint"),
            RepertoireErrorKind::BadNumber => f.write_str("invalid integer"),
            RepertoireErrorKind::MissingVersion => f.write_str("missing version line"),
            RepertoireErrorKind::DuplicateVersion => f.write_str("more than one version line"),
            RepertoireErrorKind::DuplicateCodepoint(c) => {
                write!(f, "U+{:04X} listed more than once", u32::from(*c))
            }
            RepertoireErrorKind::RankGap(r) => write!(f, "collation rank {r} missing or repeated"),
        }
    }
}

impl core::error::Error for RepertoireError {}

/// One codepoint outside the repertoire. `offset` counts codepoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub offset: usize,
    pub codepoint: char,
}

impl SindhiRepertoire {
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_REPERTOIRE).expect("shipped repertoire is well-formed")
    }

    pub fn parse(source: &str) -> Result<Self, RepertoireError> {
        let mut version = None;
        let mut ranked: Vec<(u32, char, usize)> = Vec::new();
        let mut extras = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut delimiters = Delimiters::whitespace_only();

        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let err = |kind| RepertoireError { line, kind };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "version" => {
                    let [_, v] = fields[..] else { return Err(err(RepertoireErrorKind::MalformedLine)) };
                    if version.is_some() {
                        return Err(err(RepertoireErrorKind::DuplicateVersion));
                    }
                    version = Some(v.parse().map_err(|_| err(RepertoireErrorKind::BadNumber))?);
                }
                "letter" => {
                    let [_, cp, rank] = fields[..] else {
                        return Err(err(RepertoireErrorKind::MalformedLine));
                    };
                    let c = parse_codepoint(cp).ok_or(err(RepertoireErrorKind::BadCodepoint))?;
                    let rank = rank.parse().map_err(|_| err(RepertoireErrorKind::BadNumber))?;
                    if !seen.insert(c) {
                        return Err(err(RepertoireErrorKind::DuplicateCodepoint(c)));
                    }
                    ranked.push((rank, c, line));
                }
                "extra" => {
                    let [_, cp] = fields[..] else { return Err(err(RepertoireErrorKind::MalformedLine)) };
                    let c = parse_codepoint(cp).ok_or(err(RepertoireErrorKind::BadCodepoint))?;
                    if !seen.insert(c) {
                        return Err(err(RepertoireErrorKind::DuplicateCodepoint(c)));
                    }
                    extras.insert(c);
                }
                "delimiter" => {
                    let [_, cp] = fields[..] else { return Err(err(RepertoireErrorKind::MalformedLine)) };
                    let c = parse_codepoint(cp).ok_or(err(RepertoireErrorKind::BadCodepoint))?;
                    delimiters.insert(c);
                }
                _ => return Err(err(RepertoireErrorKind::UnknownDirective)),
            }
        }

        let version = version.ok_or(RepertoireError {
            line: source.lines().count(),
            kind: RepertoireErrorKind::MissingVersion,
        })?;
        ranked.sort_unstable_by_key(|&(rank, _, _)| rank);
        for (expected, &(rank, _, line)) in ranked.iter().enumerate() {
            if rank as usize != expected {
                return Err(RepertoireError { line, kind: RepertoireErrorKind::RankGap(expected as u32) });
            }
        }
        let letters: Vec<char> = ranked.iter().map(|&(_, c, _)| c).collect();
        let ranks = letters.iter().enumerate().map(|(r, &c)| (c, r as u32)).collect();
        Ok(Self { version, letters, extras, delimiters, ranks })
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    /// Letters in collation order; a letter's index is its rank.
    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn extras(&self) -> &BTreeSet<char> {
        &self.extras
    }

    pub fn delimiters(&self) -> &Delimiters {
        &self.delimiters
    }

    pub fn rank(&self, c: char) -> Option<u32> {
        self.ranks.get(&c).copied()
    }

    pub fn permits(&self, c: char) -> bool {
        self.ranks.contains_key(&c) || self.extras.contains(&c)
    }

    /// Lists every codepoint of `text` that is neither a letter nor an
    /// extra. An empty result means the text is acceptable.
    pub fn validate(&self, text: &str) -> Vec<Violation> {
        text.chars()
            .enumerate()
            .filter(|&(_, c)| !self.permits(c))
            .map(|(offset, codepoint)| Violation { offset, codepoint })
            .collect()
    }

    /// Splits display-normalized text into words on this repertoire's
    /// delimiters.
    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        tokenize_with(text, &self.delimiters)
    }

    /// Sort weight of one codepoint: ranked letters first, everything else
    /// after them in scalar order.
    pub fn weight(&self, c: char) -> u64 {
        match self.rank(c) {
            Some(rank) => u64::from(rank),
            None => (1u64 << 32) + u64::from(u32::from(c)),
        }
    }

    /// Collation weights for a whole string, usable as a cached sort key.
    pub fn sort_key(&self, text: &str, side: Side) -> Vec<u64> {
        match side {
            Side::Sindhi => text.chars().map(|c| self.weight(c)).collect(),
            Side::English => text.chars().map(|c| u64::from(u32::from(c))).collect(),
        }
    }

    /// Dictionary order of two Key-normalized strings.
    pub fn collate(&self, a: &str, b: &str, side: Side) -> Ordering {
        match side {
            Side::Sindhi => a.chars().map(|c| self.weight(c)).cmp(b.chars().map(|c| self.weight(c))),
            Side::English => a.chars().cmp(b.chars()),
        }
    }
}

impl Default for SindhiRepertoire {
    fn default() -> Self {
        Self::shipped()
    }
}

/// Free-function form of [`SindhiRepertoire::collate`].
pub fn collate(a: &str, b: &str, side: Side, rep: &SindhiRepertoire) -> Ordering {
    rep.collate(a, b, side)
}

/// Free-function form of [`SindhiRepertoire::validate`].
pub fn validate_repertoire(text: &str, rep: &SindhiRepertoire) -> Vec<Violation> {
    rep.validate(text)
}

fn parse_codepoint(hex: &str) -> Option<char> {
    let hex = hex.strip_prefix("U+").unwrap_or(hex);
    u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn shipped_table_loads() {
        let rep = SindhiRepertoire::shipped();
        assert_eq!(rep.version(), 1);
        assert!(rep.letters().len() >= 52);
        for c in ['\u{067B}', '\u{0684}', '\u{068F}', '\u{06B3}'] {
            assert!(rep.rank(c).is_some(), "U+{:04X} should be a letter", u32::from(c));
        }
    }

    #[test]
    fn shipped_delimiters_match_standard_set() {
        assert_eq!(SindhiRepertoire::shipped().delimiters(), &Delimiters::standard());
    }

    #[test]
    fn validation_reports_latin_offsets() {
        let rep = SindhiRepertoire::shipped();
        assert!(rep.validate("").is_empty());
        assert!(rep.validate("پاڻي").is_empty());
        let bad = rep.validate("abcپ");
        assert_eq!(
            bad,
            vec![
                Violation { offset: 0, codepoint: 'a' },
                Violation { offset: 1, codepoint: 'b' },
                Violation { offset: 2, codepoint: 'c' },
            ]
        );
    }

    #[test]
    fn beh_sorts_before_beeh() {
        let rep = SindhiRepertoire::shipped();
        assert_eq!(rep.collate("ب", "ٻ", Side::Sindhi), Ordering::Less);
        assert_eq!(rep.collate("ٻ", "ب", Side::Sindhi), Ordering::Greater);
        // pairs where alphabet order and scalar order disagree
        assert_eq!(rep.collate("پ", "ث", Side::Sindhi), Ordering::Greater);
        assert!('\u{067E}' > '\u{062B}');
        assert_eq!(rep.collate("ٻ", "ت", Side::Sindhi), Ordering::Less);
        assert!('\u{067B}' > '\u{062A}');
    }

    #[test]
    fn unranked_codepoints_sort_last_then_by_scalar() {
        let rep = SindhiRepertoire::shipped();
        assert_eq!(rep.collate("z", "ي", Side::Sindhi), Ordering::Greater);
        assert_eq!(rep.collate("a", "b", Side::Sindhi), Ordering::Less);
        assert_eq!(rep.collate("ب", "بب", Side::Sindhi), Ordering::Less);
    }

    #[test]
    fn parse_rejects_bad_tables() {
        let kind = |s: &str| SindhiRepertoire::parse(s).unwrap_err().kind;
        assert_eq!(kind("letter 0628 0\n"), RepertoireErrorKind::MissingVersion);
        assert_eq!(kind("version 1\nversion 2\n"), RepertoireErrorKind::DuplicateVersion);
        assert_eq!(kind("version 1\nletter 0628 1\n"), RepertoireErrorKind::RankGap(0));
        assert_eq!(
            kind("version 1\nletter 0628 0\nletter 0629 0\n"),
            RepertoireErrorKind::RankGap(1)
        );
        assert_eq!(
            kind("version 1\nletter 0628 0\nextra 0628\n"),
            RepertoireErrorKind::DuplicateCodepoint('\u{0628}')
        );
        assert_eq!(kind("version 1\nglyph 0628\n"), RepertoireErrorKind::UnknownDirective);
        assert_eq!(kind("version 1\nextra D800\n"), RepertoireErrorKind::BadCodepoint);
        assert_eq!(kind("version 1\nextra\n"), RepertoireErrorKind::MalformedLine);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = SindhiRepertoire::parse("# header\nversion 1\n\nletter zz 0\n").unwrap_err();
        assert_eq!(err.line, 4);
    }

    #[test]
    fn delimiters_are_separate_from_extras() {
        let rep = SindhiRepertoire::parse("version 3\nletter 0628 0\ndelimiter 002D\n").unwrap();
        assert!(rep.delimiters().contains('-'));
        assert!(!rep.permits('-'));
        let words: Vec<_> = rep.tokenize("ب-بب").into_iter().map(|t| t.text).collect();
        assert_eq!(words, ["ب", "بب"]);
    }
}
