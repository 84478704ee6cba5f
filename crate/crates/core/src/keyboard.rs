//! On-screen keyboard layout.
//!
//! ```text
//! version 1
//! row 0627 0628 062C+06BE
//! ```
//!
//! Each `row` line lists keys separated by whitespace; a key is one or more
//! hex codepoints joined with `+` and inserts exactly those codepoints.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub const SHIPPED_KEYBOARD: &str = include_str!("../data/sindhi.keyboard");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Key {
    pub label: String,
    pub codepoints: Vec<char>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyboardLayout {
    pub version: u32,
    pub rows: Vec<Vec<Key>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutError {
    pub line: usize,
    pub message: &'static str,
}

impl fmt::Display for LayoutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "keyboard line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for LayoutError {}

impl KeyboardLayout {
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_KEYBOARD).expect("shipped keyboard layout is well-formed")
    }

    pub fn parse(source: &str) -> Result<Self, LayoutError> {
        let mut version = None;
        let mut rows = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line = idx + 1;
            let err = |message| LayoutError { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            let mut fields = content.split_whitespace();
            match fields.next() {
                None => {}
                Some("version") => {
                    let v = fields.next().and_then(|v| v.parse().ok());
                    version = Some(v.ok_or(err("invalid version"))?);
                }
                Some("row") => {
                    let mut row = Vec::new();
                    for spec in fields {
                        let codepoints = spec
                            .split('+')
                            .map(|hex| u32::from_str_radix(hex, 16).ok().and_then(char::from_u32))
                            .collect::<Option<Vec<char>>>()
                            .ok_or(err("invalid codepoint"))?;
                        row.push(Key { label: codepoints.iter().collect(), codepoints });
                    }
                    if row.is_empty() {
                        return Err(err("empty row"));
                    }
                    rows.push(row);
                }
                Some(_) => return Err(err("unknown directive")),
            }
        }
        let version = version.ok_or(LayoutError { line: 0, message: "missing version line" })?;
        Ok(Self { version, rows })
    }

    pub fn keys(&self) -> impl Iterator<Item = &Key> {
        self.rows.iter().flatten()
    }
}
