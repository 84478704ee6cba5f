//! Independent tokenizer oracle and its input generator.

use lughat_core::{SindhiRepertoire, Token};
use proptest::prelude::*;
use unicode_normalization::UnicodeNormalization;

/// Delimiters written out independently of the tokenizer's own table.
pub fn reference_is_delimiter(c: char) -> bool {
    c.is_whitespace()
        || "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~".contains(c)
        || matches!(c, '\u{060C}' | '\u{061B}' | '\u{061F}' | '\u{06D4}')
}

/// One character at a time: accumulate non-delimiters, flush on a delimiter
/// or at the end, skip texts already emitted.
pub fn reference_scan(text: &str) -> Vec<Token> {
    let mut out: Vec<Token> = Vec::new();
    let mut emitted: Vec<String> = Vec::new();
    let mut buf = String::new();
    let mut start = 0;
    let chars: Vec<char> = text.chars().collect();
    for i in 0..=chars.len() {
        let at_boundary = i == chars.len() || reference_is_delimiter(chars[i]);
        if at_boundary {
            if !buf.is_empty() && !emitted.contains(&buf) {
                emitted.push(buf.clone());
                out.push(Token { text: buf.nfc().collect(), start, end: i });
            }
            buf.clear();
        } else {
            if buf.is_empty() {
                start = i;
            }
            buf.push(chars[i]);
        }
    }
    out
}

pub fn mixed_char() -> impl Strategy<Value = char> {
    let rep = SindhiRepertoire::shipped();
    let letters: Vec<char> = rep.letters().to_vec();
    prop_oneof![
        8 => prop::sample::select(letters),
        3 => prop::sample::select(vec![' ', '\t', '\n', '\u{00A0}', '\u{2003}', '\u{3000}']),
        3 => prop::sample::select(vec!['،', '؛', '؟', '۔', ',', '.', ';', '!', '-', '(', ')', '"']),
        2 => prop::sample::select(vec!['\u{064E}', '\u{0650}', '\u{064F}', '\u{0651}', '\u{0653}', '\u{0654}', '\u{0640}', '\u{200C}']),
        2 => any::<char>(),
        1 => prop::sample::select(vec!['a', 'Z', '7', '٣', '۵', 'é', 'ß', 'İ', 'Σ']),
    ]
}

pub fn mixed_string(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(mixed_char(), 0..max).prop_map(|v| v.into_iter().collect())
}
