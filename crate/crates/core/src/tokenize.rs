//! Splitting Sindhi meanings into individual words.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use unicode_normalization::UnicodeNormalization;

/// Arabic punctuation that separates words in Sindhi orthography.
pub const ARABIC_DELIMITERS: [char; 4] = ['\u{060C}', '\u{061B}', '\u{061F}', '\u{06D4}'];

/// The set of codepoints that end a word. Unicode whitespace is always part
/// of the set; anything else is listed explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delimiters {
    extra: BTreeSet<char>,
}

impl Delimiters {
    /// Whitespace only.
    pub fn whitespace_only() -> Self {
        Self { extra: BTreeSet::new() }
    }

    /// Whitespace, ASCII punctuation and the Arabic comma, semicolon,
    /// question mark and full stop.
    pub fn standard() -> Self {
        let mut extra: BTreeSet<char> =
            (0x21u8..0x7f).map(char::from).filter(char::is_ascii_punctuation).collect();
        extra.extend(ARABIC_DELIMITERS);
        Self { extra }
    }

    pub fn insert(&mut self, c: char) {
        if !c.is_whitespace() {
            self.extra.insert(c);
        }
    }

    pub fn contains(&self, c: char) -> bool {
        c.is_whitespace() || self.extra.contains(&c)
    }

    /// The explicitly listed (non-whitespace) delimiters in scalar order.
    pub fn explicit(&self) -> impl Iterator<Item = char> + '_ {
        self.extra.iter().copied()
    }
}

impl Default for Delimiters {
    fn default() -> Self {
        Self::standard()
    }
}

/// One word cut out of a meaning.
///
/// `start..end` are codepoint offsets into the tokenized text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Tokenizes display-normalized Sindhi text with the standard delimiters.
pub fn tokenize_sindhi(text: &str) -> Vec<Token> {
    tokenize_with(text, &Delimiters::standard())
}

/// Tokenizes `text` on `delimiters`, dropping empty pieces and any token
/// whose text already appeared earlier.
pub fn tokenize_with(text: &str, delimiters: &Delimiters) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    // (byte offset, codepoint offset) of the current token's first char
    let mut open: Option<(usize, usize)> = None;
    let mut cp = 0usize;

    let mut close = |from: (usize, usize), to_byte: usize, to_cp: usize, tokens: &mut Vec<Token>| {
        let slice = &text[from.0..to_byte];
        if seen.insert(slice) {
            tokens.push(Token { text: slice.nfc().collect(), start: from.1, end: to_cp });
        }
    };

    for (byte, c) in text.char_indices() {
        if delimiters.contains(c) {
            if let Some(from) = open.take() {
                close(from, byte, cp, &mut tokens);
            }
        } else if open.is_none() {
            open = Some((byte, cp));
        }
        cp += 1;
    }
    if let Some(from) = open {
        close(from, text.len(), cp, &mut tokens);
    }
    tokens
}
