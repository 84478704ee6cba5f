//! Unicode normalization for headwords, glosses and lookup keys.

use alloc::string::String;
use unicode_normalization::UnicodeNormalization;

/// U+0640 ARABIC TATWEEL, a purely cosmetic elongation mark.
pub const TATWEEL: char = '\u{0640}';

/// Which language a piece of text belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Sindhi,
    English,
}

/// How aggressively text is folded.
///
/// `Display` keeps everything a reader should see (diacritics, tatweel, case)
/// and only canonicalizes. `Key` produces the form used to address records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Key,
    Display,
}

/// Arabic-script vowel and pronunciation marks that are optional in written
/// Sindhi: U+064B..=U+065F and the superscript alef U+0670.
pub fn is_harakat(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}')
}

/// Canonicalizes `raw` for the given profile and side.
///
/// Every profile composes to NFC, trims surrounding whitespace and collapses
/// internal whitespace runs to a single U+0020. `Key` additionally drops
/// tatweel, drops harakat on the Sindhi side and lowercases on the English
/// side. The function is total and idempotent; an empty result means the
/// input carries no usable key.
pub fn normalize_text(raw: &str, profile: Profile, side: Side) -> String {
    let mut current = fold_once(raw, profile, side);
    // Case mapping and mark removal can expose a new composition; iterate
    // to a fixpoint. Real text settles after one pass.
    for _ in 0..4 {
        let next = fold_once(&current, profile, side);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn fold_once(raw: &str, profile: Profile, side: Side) -> String {
    let composed: String = raw.nfc().collect();
    let folded = match profile {
        Profile::Display => composed,
        Profile::Key => {
            let stripped: String = composed
                .chars()
                .filter(|&c| c != TATWEEL && !(side == Side::Sindhi && is_harakat(c)))
                .collect();
            let cased = match side {
                Side::English => stripped.to_lowercase(),
                Side::Sindhi => stripped,
            };
            cased.nfc().collect()
        }
    };
    collapse_whitespace(&folded)
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// Key-normalizes `raw` for `side`.
pub fn key_form(raw: &str, side: Side) -> String {
    normalize_text(raw, Profile::Key, side)
}

/// Display-normalizes `raw`. Display folding does not depend on the side.
pub fn display_form(raw: &str) -> String {
    normalize_text(raw, Profile::Display, Side::Sindhi)
}
