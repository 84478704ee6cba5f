//! The on-disk store file.
//!
//! UTF-8, LF line endings. Line 1 is a header object:
//!
//! ```text
//! {"magic":"LUGHAT01","format_version":1,"repertoire_version":1,"entry_count_e2s":2,"entry_count_s2e":3}
//! ```
//!
//! followed by `entry_count_e2s` English-to-Sindhi records and then
//! `entry_count_s2e` Sindhi-to-English records, one [`ApiEntry`] object per
//! line, each section in collation order. Every line ends with LF. Equal
//! lexicons always produce identical bytes.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use lughat_core::crosslink::repair;
use lughat_core::lexicon::sanitize;
use lughat_core::{
    ChangeSet, ConsistencyReport, DictionaryKind, EntryStore, Lexicon, Provenance, SindhiRepertoire,
};
use serde::{Deserialize, Serialize};

use crate::api::ApiEntry;

pub const MAGIC: &str = "LUGHAT01";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoreFileHeader {
    pub magic: String,
    pub format_version: u32,
    pub repertoire_version: u32,
    pub entry_count_e2s: usize,
    pub entry_count_s2e: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("not a lughat store file")]
    BadMagic,
    #[error("unsupported store format version {0}")]
    UnsupportedVersion(u64),
    #[error("store was written with repertoire version {file}, but version {loaded} is loaded")]
    RepertoireMismatch { file: u32, loaded: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate {kind} key {key:?}")]
    DuplicateKey { line: usize, kind: DictionaryKind, key: String },
    #[error("store is inconsistent ({} problems, first: {})", .0.violations.len(), .0.violations.first().map(ToString::to_string).unwrap_or_default())]
    Consistency(ConsistencyReport),
}

impl StoreError {
    fn io(path: &Path, source: io::Error) -> Self {
        StoreError::Io { path: path.to_owned(), source }
    }
}

/// Points during [`save_with`] where a test can inject a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SavePhase {
    /// The temporary sibling is fully written and synced; the target has not
    /// been replaced yet.
    TempWritten,
}

/// Serializes the lexicon to store-file bytes.
pub fn encode_store<S: EntryStore>(lex: &Lexicon<S>) -> Vec<u8> {
    let header = StoreFileHeader {
        magic: MAGIC.into(),
        format_version: FORMAT_VERSION,
        repertoire_version: lex.repertoire().version(),
        entry_count_e2s: lex.len(DictionaryKind::EnglishToSindhi),
        entry_count_s2e: lex.len(DictionaryKind::SindhiToEnglish),
    };
    let mut out = serde_json::to_vec(&header).expect("header serializes");
    out.push(b'\n');
    for kind in DictionaryKind::ALL {
        for (_, record) in lex.sorted_entries(kind) {
            let entry = ApiEntry::from_record(kind, record).expect("stored headwords have keys");
            serde_json::to_writer(&mut out, &entry).expect("entries serialize");
            out.push(b'\n');
        }
    }
    out
}

fn temp_sibling(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "store".into());
    path.with_file_name(format!(".{name}.tmp"))
}

/// Writes the lexicon to `path` atomically and returns the byte count.
/// Refuses to write a lexicon that fails the consistency check.
pub fn save<S: EntryStore>(lex: &Lexicon<S>, path: &Path) -> Result<u64, StoreError> {
    save_with(lex, path, |_| Ok(()))
}

/// [`save`] with a hook called at each [`SavePhase`]; an error from the
/// hook aborts the save as a crash would.
pub fn save_with<S: EntryStore>(
    lex: &Lexicon<S>,
    path: &Path,
    mut hook: impl FnMut(SavePhase) -> io::Result<()>,
) -> Result<u64, StoreError> {
    let report = lex.check_consistency();
    if !report.is_ok() {
        return Err(StoreError::Consistency(report));
    }
    let bytes = encode_store(lex);
    let temp = temp_sibling(path);
    let result = (|| {
        let mut file = File::create(&temp)?;
        file.write_all(&bytes)?;
        file.sync_all()?;
        drop(file);
        hook(SavePhase::TempWritten)?;
        fs::rename(&temp, path)?;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            // directory fsync is not supported everywhere
            let _ = File::open(dir).and_then(|d| d.sync_all());
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(bytes.len() as u64),
        Err(e) => {
            let _ = fs::remove_file(&temp);
            Err(StoreError::io(path, e))
        }
    }
}

/// Options for [`load_with`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Rebuild derived links instead of failing on an inconsistent store.
    pub repair: bool,
    /// Repertoire to validate against; the shipped one when `None`.
    pub repertoire: Option<SindhiRepertoire>,
}

#[derive(Debug)]
pub struct Loaded<S: EntryStore> {
    pub lexicon: Lexicon<S>,
    /// What a repair changed, when one was needed.
    pub repaired: Option<ChangeSet>,
}

pub fn load<S: EntryStore>(path: &Path) -> Result<Lexicon<S>, StoreError> {
    load_with(path, &LoadOptions::default()).map(|l| l.lexicon)
}

pub fn load_with<S: EntryStore>(path: &Path, options: &LoadOptions) -> Result<Loaded<S>, StoreError> {
    let bytes = fs::read(path).map_err(|e| StoreError::io(path, e))?;
    decode_store(&bytes, options)
}

/// Parses store-file bytes.
pub fn decode_store<S: EntryStore>(bytes: &[u8], options: &LoadOptions) -> Result<Loaded<S>, StoreError> {
    let repertoire = options.repertoire.clone().unwrap_or_else(SindhiRepertoire::shipped);
    let mut lines = bytes.split_inclusive(|&b| b == b'\n').enumerate().map(|(i, l)| (i + 1, l));

    let (_, first) = lines.next().ok_or(StoreError::BadMagic)?;
    let header_value: serde_json::Value = serde_json::from_slice(strip_lf(first)).map_err(|_| StoreError::BadMagic)?;
    if header_value.get("magic").and_then(|m| m.as_str()) != Some(MAGIC) {
        return Err(StoreError::BadMagic);
    }
    match header_value.get("format_version").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(FORMAT_VERSION) => {}
        Some(v) => return Err(StoreError::UnsupportedVersion(v)),
        None => return Err(parse_err(1, "missing format_version")),
    }
    let header: StoreFileHeader = serde_json::from_value(header_value).map_err(|e| parse_err(1, e))?;
    check_line_end(1, first)?;
    if header.repertoire_version != repertoire.version() {
        return Err(StoreError::RepertoireMismatch { file: header.repertoire_version, loaded: repertoire.version() });
    }

    let mut lex = Lexicon::<S>::with_repertoire(repertoire);
    let sections = [
        (DictionaryKind::EnglishToSindhi, header.entry_count_e2s),
        (DictionaryKind::SindhiToEnglish, header.entry_count_s2e),
    ];
    let mut expected_line = 2;
    for (kind, count) in sections {
        let mut seen = HashSet::with_capacity(count);
        for _ in 0..count {
            let Some((line, raw)) = lines.next() else {
                return Err(parse_err(expected_line, format!("expected {kind} record, found end of file")));
            };
            expected_line = line + 1;
            check_line_end(line, raw)?;
            let entry: ApiEntry = serde_json::from_slice(strip_lf(raw)).map_err(|e| parse_err(line, e))?;
            let (entry_kind, key, record) = entry.into_parts().map_err(|m| parse_err(line, m))?;
            if entry_kind != kind {
                return Err(parse_err(line, format!("{entry_kind} record in the {kind} section")));
            }
            check_record(&lex, kind, key.as_str(), &record).map_err(|m| parse_err(line, m))?;
            if !seen.insert(key.as_str().to_owned()) {
                return Err(StoreError::DuplicateKey { line, kind, key: key.into_string() });
            }
            lex.insert_unchecked(kind, key, record);
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "more records than the header declares"));
    }

    let report = lex.check_consistency();
    let repaired = if report.is_ok() {
        None
    } else if options.repair {
        Some(repair(&mut lex))
    } else {
        return Err(StoreError::Consistency(report));
    };
    lex.mark_clean();
    Ok(Loaded { lexicon: lex, repaired })
}

/// A record must look exactly like one the lexicon itself would store.
fn check_record<S: EntryStore>(
    lex: &Lexicon<S>,
    kind: DictionaryKind,
    key: &str,
    record: &lughat_core::EntryRecord,
) -> Result<(), String> {
    let canonical = sanitize(record.clone());
    if &canonical != record {
        return Err("text is not in canonical display form".into());
    }
    if lughat_core::text::key_form(&record.headword, kind.headword_side()) != key {
        return Err("key does not match headword".into());
    }
    if record.revision == 0 {
        return Err("revision must be at least 1".into());
    }
    match (kind, record.provenance) {
        (DictionaryKind::EnglishToSindhi, Provenance::Derived) => return Err("English records cannot be derived".into()),
        (DictionaryKind::EnglishToSindhi, _) if !record.derived_from.is_empty() => {
            return Err("English records have no sources".into())
        }
        (_, Provenance::Derived) if record.derived_from.is_empty() => return Err("derived record without sources".into()),
        _ => {}
    }
    let rep = lex.repertoire();
    let sindhi_fields = std::iter::once(&record.headword)
        .filter(|_| kind == DictionaryKind::SindhiToEnglish)
        .chain(&record.sindhi_glosses);
    for text in sindhi_fields {
        if let Some(v) = rep.validate(text).first() {
            return Err(format!("U+{:04X} is outside the Sindhi repertoire", v.codepoint as u32));
        }
    }
    Ok(())
}

fn strip_lf(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\n").unwrap_or(line)
}

fn check_line_end(line: usize, raw: &[u8]) -> Result<(), StoreError> {
    if !raw.ends_with(b"\n") {
        Err(parse_err(line, "truncated line"))
    } else if raw.ends_with(b"\r\n") {
        Err(parse_err(line, "CRLF line ending"))
    } else {
        Ok(())
    }
}

fn parse_err(line: usize, message: impl ToString) -> StoreError {
    StoreError::Parse { line, message: message.to_string() }
}
