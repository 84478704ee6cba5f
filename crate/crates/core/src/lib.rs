//! Bilingual English/Sindhi lexicon engine.
//!
//! Two keyed stores hold dictionary records: English headwords with their
//! Sindhi meanings, and Sindhi headwords with their English meanings. The
//! Sindhi side is generated from the English side by splitting each Sindhi
//! meaning into words ([`crosslink`]) and stays consistent with it under
//! every add, edit and delete.
//!
//! The crate is `no_std` and needs only `alloc`; file formats, the command
//! line and the HTTP service live in the `lughat` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod changeset;
pub mod crosslink;
pub mod keyboard;
pub mod lexicon;
pub mod record;
pub mod repertoire;
pub mod store;
pub mod text;
pub mod tokenize;

pub use changeset::{Change, ChangeLog, ChangeSet};
pub use crosslink::{check_consistency, ConsistencyReport, ConsistencyViolation, ViolationKind};
pub use keyboard::{Key, KeyboardLayout};
pub use lexicon::{FieldViolation, Lexicon, LexiconError, Snapshot, WordListing};
pub use record::{DictionaryKind, EntryRecord, NormalizedKey, Provenance};
pub use repertoire::{collate, validate_repertoire, SindhiRepertoire, Violation};
pub use store::{EntryStore, HashStore, SortedStore};
pub use text::{normalize_text, Profile, Side};
pub use tokenize::{tokenize_sindhi, Delimiters, Token};
