//! The `lughat` command line.
//!
//! Exit codes: 0 success, 1 entry not found, 2 invalid input (empty or
//! out-of-repertoire text, a linked Sindhi entry, bad TSV lines), 3 I/O
//! failure or unreadable store, 4 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lughat_core::{ChangeSet, DictionaryKind, EntryRecord, Lexicon, LexiconError};

use crate::api::{self, ApiEntry, ChangeSetJson, ErrorBody, Stats};
use crate::storefile::{self, LoadOptions, StoreError};
use crate::tsv::{self, TsvError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "lughat", version, about = "English/Sindhi dictionary store")]
pub struct Cli {
    /// Store file to operate on.
    #[arg(long, env = "LUGHAT_STORE", default_value = "./lughat.store", global = true)]
    pub store: PathBuf,
    /// Dictionary: e2s (English to Sindhi) or s2e (Sindhi to English).
    #[arg(long, default_value = "e2s", global = true)]
    pub kind: DictionaryKind,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Rebuild derived Sindhi entries if the store is inconsistent, and save
    /// the result.
    #[arg(long, global = true)]
    pub repair: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create an empty store file.
    Init {
        /// Replace an existing store.
        #[arg(long)]
        force: bool,
    },
    /// Add an entry, or replace the entry with the same headword.
    Add {
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "")]
        pron: String,
        #[arg(long, default_value = "")]
        grammar: String,
        /// Sindhi meaning; repeat for several.
        #[arg(long)]
        sindhi: Vec<String>,
        /// English meaning; repeat for several.
        #[arg(long)]
        english: Vec<String>,
    },
    /// Show one entry.
    Get { word: String },
    /// Delete one entry.
    Delete { word: String },
    /// List headwords in collation order.
    List {
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Split Sindhi text into words.
    Tokenize { text: String },
    /// Add or replace entries from a TSV file.
    Import { file: PathBuf },
    /// Write one dictionary as TSV.
    Export { file: PathBuf },
    /// Run the local HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory of static files served at /.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// Entry counts.
    Stats,
}

struct Failure {
    code: i32,
    body: ErrorBody,
}

impl Failure {
    fn new(code: i32, error: &'static str, message: impl Into<String>) -> Self {
        Failure { code, body: ErrorBody::new(error, message) }
    }
}

impl From<LexiconError> for Failure {
    fn from(err: LexiconError) -> Self {
        let code = if err == LexiconError::NotFound { EXIT_NOT_FOUND } else { EXIT_INVALID };
        Failure { code, body: ErrorBody::from(&err) }
    }
}

impl From<StoreError> for Failure {
    fn from(err: StoreError) -> Self {
        Failure::new(EXIT_IO, "store", err.to_string())
    }
}

impl From<TsvError> for Failure {
    fn from(err: TsvError) -> Self {
        match err {
            TsvError::MissingHeader => Failure::new(EXIT_INVALID, "tsv", err.to_string()),
            TsvError::Io(_) => Failure::new(EXIT_IO, "io", err.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = if cli.json {
                err.write_all(api::encode(&failure.body).as_bytes())
            } else {
                writeln!(err, "lughat: {}", failure.body.message)
            };
            failure.code
        }
    }
}

enum Missing {
    Empty,
    Fail,
}

/// Loads the store; a missing file counts as an empty lexicon when
/// `missing` allows it. Applies and saves `--repair`.
fn open(cli: &Cli, missing: Missing, err: &mut dyn Write) -> Result<Lexicon, Failure> {
    if !cli.store.exists() {
        return match missing {
            Missing::Empty => Ok(Lexicon::new()),
            Missing::Fail => Err(Failure::new(
                EXIT_IO,
                "store",
                format!("{}: no store file (create one with `lughat init`)", cli.store.display()),
            )),
        };
    }
    let loaded = storefile::load_with(&cli.store, &LoadOptions { repair: cli.repair, ..LoadOptions::default() })?;
    if let Some(changes) = &loaded.repaired {
        let _ = writeln!(err, "lughat: repaired store ({} changes)", changes.len());
        storefile::save(&loaded.lexicon, &cli.store)?;
    }
    Ok(loaded.lexicon)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let kind = cli.kind;
    let write = |out: &mut dyn Write, text: &str| {
        out.write_all(text.as_bytes()).map_err(|e| Failure::new(EXIT_IO, "io", e.to_string()))
    };
    match &cli.command {
        Command::Init { force } => {
            if cli.store.exists() && !force {
                return Err(Failure::new(
                    EXIT_IO,
                    "store",
                    format!("{} already exists (use --force to replace it)", cli.store.display()),
                ));
            }
            let bytes = storefile::save(&Lexicon::<lughat_core::HashStore>::new(), &cli.store)?;
            if cli.json {
                write(out, &api::encode(&serde_json::json!({ "store": cli.store.display().to_string(), "bytes": bytes })))?;
            } else {
                write(out, &format!("initialized {}\n", cli.store.display()))?;
            }
        }
        Command::Add { word, pron, grammar, sindhi, english } => {
            let mut lex = open(cli, Missing::Empty, err)?;
            let record = EntryRecord::new(word.as_str())
                .with_pronunciation(pron.as_str())
                .with_grammar(grammar.as_str())
                .with_sindhi_glosses(sindhi)
                .with_english_glosses(english);
            let changes = lex.put(kind, record)?;
            storefile::save(&lex, &cli.store)?;
            write(out, &render_changes(&changes, cli.json))?;
        }
        Command::Get { word } => {
            let lex = open(cli, Missing::Fail, err)?;
            let record = lex.get(kind, word).ok_or(LexiconError::NotFound)?;
            let entry = ApiEntry::from_record(kind, record).expect("stored headwords have keys");
            write(out, &if cli.json { api::encode(&entry) } else { render_entry(&entry) })?;
        }
        Command::Delete { word } => {
            let mut lex = open(cli, Missing::Empty, err)?;
            let changes = lex.delete(kind, word)?;
            storefile::save(&lex, &cli.store)?;
            write(out, &render_changes(&changes, cli.json))?;
        }
        Command::List { prefix, offset, limit } => {
            let lex = open(cli, Missing::Fail, err)?;
            let list = api::word_list(&lex, kind, prefix, *offset, *limit);
            if cli.json {
                write(out, &api::encode(&list))?;
            } else {
                let mut text = String::new();
                for item in &list.items {
                    text.push_str(&item.headword);
                    if item.provenance != "manual" {
                        text.push_str(&format!("\t({})", item.provenance));
                    }
                    text.push('\n');
                }
                write(out, &text)?;
                let shown = list.items.len();
                if shown < list.total {
                    let _ = writeln!(err, "showing {}-{} of {}", list.offset + 1, list.offset + shown, list.total);
                }
            }
        }
        Command::Tokenize { text } => {
            let tokens = api::tokens(&lughat_core::SindhiRepertoire::shipped(), text);
            if cli.json {
                write(out, &api::encode(&tokens))?;
            } else {
                write(out, &tokens.tokens.iter().map(|t| format!("{t}\n")).collect::<String>())?;
            }
        }
        Command::Import { file } => {
            let mut lex = open(cli, Missing::Empty, err)?;
            let report = tsv::import_tsv(&mut lex, file, kind)?;
            storefile::save(&lex, &cli.store)?;
            write(out, &render_changes(&report.changes, cli.json))?;
            for line_error in &report.errors {
                let _ = writeln!(err, "{}: {line_error}", file.display());
            }
            if !report.errors.is_empty() {
                let _ = writeln!(err, "imported {} lines, skipped {}", report.applied, report.errors.len());
                return Ok(EXIT_INVALID);
            }
        }
        Command::Export { file } => {
            let lex = open(cli, Missing::Fail, err)?;
            let lines = tsv::export_tsv(&lex, file, kind)?;
            if cli.json {
                write(out, &api::encode(&serde_json::json!({ "lines": lines })))?;
            } else {
                write(out, &format!("exported {lines} entries to {}\n", file.display()))?;
            }
        }
        Command::Serve { port, assets } => {
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::new(EXIT_IO, "io", e.to_string()))?;
            runtime
                .block_on(crate::service::serve(&cli.store, *port, assets.as_deref(), cli.repair))
                .map_err(|e| Failure::new(EXIT_IO, "io", e.to_string()))?;
        }
        Command::Stats => {
            let lex = open(cli, Missing::Fail, err)?;
            let stats = Stats::of(&lex);
            if cli.json {
                write(out, &api::encode(&stats))?;
            } else {
                write(
                    out,
                    &format!(
                        "e2s entries\t{}\ns2e entries\t{}\n  derived\t{}\n  manual\t{}\n",
                        stats.entries_e2s, stats.entries_s2e, stats.derived_s2e, stats.manual_s2e
                    ),
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn render_entry(entry: &ApiEntry) -> String {
    let rows = [
        ("kind", entry.kind.clone()),
        ("headword", entry.headword.clone()),
        ("pronunciation", entry.pronunciation.clone()),
        ("grammar", entry.grammar.clone()),
        ("sindhi", entry.sindhi_glosses.join("\u{060C} ")),
        ("english", entry.english_glosses.join(", ")),
        ("provenance", entry.provenance.clone()),
        ("derived from", entry.derived_from.join(", ")),
        ("revision", entry.revision.to_string()),
    ];
    rows.iter().map(|(name, value)| format!("{name:<14}{value}\n")).collect()
}

fn render_changes(changes: &ChangeSet, json: bool) -> String {
    if json {
        return api::encode(&ChangeSetJson::from(changes));
    }
    if changes.is_empty() {
        return "no changes\n".into();
    }
    let groups = [("created", &changes.created), ("updated", &changes.updated), ("deleted", &changes.deleted)];
    let mut text = String::new();
    for (label, list) in groups {
        for change in list.iter() {
            text.push_str(&format!("{label}\t{}\t{}\trev {}\n", change.kind, change.record.headword, change.record.revision));
        }
    }
    text
}
