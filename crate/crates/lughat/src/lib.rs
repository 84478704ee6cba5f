//! Store files, TSV interchange, the `lughat` command line and the local
//! HTTP service, built on [`lughat_core`].

pub mod api;
pub mod cli;
pub mod service;
pub mod storefile;
pub mod tsv;

pub use storefile::{load, load_with, save, save_with, LoadOptions, StoreError};
