//! Five-column TSV interchange.
//!
//! The first line is always
//! `headword<TAB>pronunciation<TAB>grammar<TAB>sindhi_meaning<TAB>english_meaning`.
//! Meaning columns hold a gloss list joined with `"، "` (U+060C and a space).
//! Inside a field `\\`, `\t`, `\n` and `\r` stand for a backslash, tab, LF
//! and CR, and `\،` is an Arabic comma that belongs to the gloss instead of
//! separating two glosses.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use lughat_core::{ChangeLog, ChangeSet, DictionaryKind, EntryRecord, EntryStore, Lexicon};

pub const HEADER: &str = "headword\tpronunciation\tgrammar\tsindhi_meaning\tenglish_meaning";
const LIST_SEPARATOR: char = '\u{060C}';

#[derive(Debug, thiserror::Error)]
pub enum TsvError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("first line must be the column header")]
    MissingHeader,
}

/// A skipped input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Default)]
pub struct ImportReport {
    /// Net effect of every applied line.
    pub changes: ChangeSet,
    pub applied: usize,
    pub errors: Vec<LineError>,
}

fn escape_into(out: &mut String, text: &str, in_list: bool) {
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            LIST_SEPARATOR if in_list => out.push_str("\\\u{060C}"),
            c => out.push(c),
        }
    }
}

fn push_list(out: &mut String, glosses: &[String]) {
    for (i, gloss) in glosses.iter().enumerate() {
        if i > 0 {
            out.push_str("\u{060C} ");
        }
        escape_into(out, gloss, true);
    }
}

/// One data line, without the trailing LF.
pub fn format_line(record: &EntryRecord) -> String {
    let mut out = String::new();
    escape_into(&mut out, &record.headword, false);
    out.push('\t');
    escape_into(&mut out, &record.pronunciation, false);
    out.push('\t');
    escape_into(&mut out, &record.grammar, false);
    out.push('\t');
    push_list(&mut out, &record.sindhi_glosses);
    out.push('\t');
    push_list(&mut out, &record.english_glosses);
    out
}

/// Splits on unescaped separators and resolves escapes. `separator` is
/// `None` for scalar fields.
fn unescape(field: &str, separator: Option<char>) -> Result<Vec<String>, String> {
    let mut parts = vec![String::new()];
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        let current = parts.last_mut().expect("never empty");
        match c {
            '\\' => match chars.next() {
                Some('\\') => current.push('\\'),
                Some('t') => current.push('\t'),
                Some('n') => current.push('\n'),
                Some('r') => current.push('\r'),
                Some(LIST_SEPARATOR) => current.push(LIST_SEPARATOR),
                Some(other) => return Err(format!("unknown escape \\{other}")),
                None => return Err("dangling backslash".into()),
            },
            c if Some(c) == separator => {
                parts.push(String::new());
                if chars.as_str().starts_with(' ') {
                    chars.next();
                }
            }
            c => current.push(c),
        }
    }
    Ok(parts)
}

/// Parses one data line into a record (not yet normalized).
pub fn parse_line(line: &str) -> Result<EntryRecord, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 columns, found {}", fields.len()));
    }
    let scalar = |s: &str| unescape(s, None).map(|mut v| v.remove(0));
    let list = |s: &str| if s.is_empty() { Ok(Vec::new()) } else { unescape(s, Some(LIST_SEPARATOR)) };
    Ok(EntryRecord::new(scalar(fields[0])?)
        .with_pronunciation(scalar(fields[1])?)
        .with_grammar(scalar(fields[2])?)
        .with_sindhi_glosses(list(fields[3])?)
        .with_english_glosses(list(fields[4])?))
}

/// The whole export as a string: header plus one line per record in
/// collation order.
pub fn export_string<S: EntryStore>(lex: &Lexicon<S>, kind: DictionaryKind) -> (String, usize) {
    let mut out = String::from(HEADER);
    out.push('\n');
    let entries = lex.sorted_entries(kind);
    for (_, record) in &entries {
        out.push_str(&format_line(record));
        out.push('\n');
    }
    (out, entries.len())
}

/// Writes `kind` to `path` and returns the number of data lines.
pub fn export_tsv<S: EntryStore>(lex: &Lexicon<S>, path: &Path, kind: DictionaryKind) -> Result<usize, TsvError> {
    let (text, lines) = export_string(lex, kind);
    fs::write(path, text)?;
    Ok(lines)
}

/// Applies every data line of `text` as a put. Bad lines are reported and
/// skipped; the rest still apply.
pub fn import_str<S: EntryStore>(lex: &mut Lexicon<S>, text: &str, kind: DictionaryKind) -> Result<ImportReport, TsvError> {
    let mut lines = text.split('\n');
    if lines.next().map(|h| h.strip_suffix('\r').unwrap_or(h)) != Some(HEADER) {
        return Err(TsvError::MissingHeader);
    }
    let mut report = ImportReport::default();
    let mut log = ChangeLog::new();
    let mut tag = 0;
    let count = text.split('\n').count();
    for (index, raw) in lines.enumerate() {
        let line = index + 2;
        if raw.is_empty() && line == count {
            break;
        }
        let outcome = parse_line(raw).and_then(|record| lex.put(kind, record).map_err(|e| e.to_string()));
        match outcome {
            Ok(changes) => {
                tag = changes.session_tag;
                log.absorb(changes);
                report.applied += 1;
            }
            Err(reason) => report.errors.push(LineError { line, reason }),
        }
    }
    report.changes = log.finish(tag);
    Ok(report)
}

pub fn import_tsv<S: EntryStore>(lex: &mut Lexicon<S>, path: &Path, kind: DictionaryKind) -> Result<ImportReport, TsvError> {
    let text = fs::read_to_string(path)?;
    import_str(lex, &text, kind)
}
