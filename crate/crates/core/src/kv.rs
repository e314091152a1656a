//! Line-based `key = value` text, shared by the calibration and config files.

use crate::{Error, Result};

/// One `key = value` entry with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits `text` into entries. Blank lines and `#` comments are skipped;
/// duplicate keys are rejected.
pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw_line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| {
            Error::parse(line, format!("expected `key = value`, got {trimmed:?}"))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::parse(line, "empty key"));
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(Error::parse(line, format!("duplicate key `{key}`")));
        }
        entries.push(Entry {
            line,
            key: key.to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

impl Entry {
    pub fn parse_value<T: std::str::FromStr>(&self) -> Result<T> {
        self.value.parse().map_err(|_| {
            Error::parse(
                self.line,
                format!("invalid value {:?} for `{}`", self.value, self.key),
            )
        })
    }
}
