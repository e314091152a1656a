//! Command-line front end for the `wavesoil` engine: datalogging, WAV
//! rendering, calibration and spectrum checks.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub mod args;
pub mod commands;
pub mod config;
pub mod wav;

pub use args::{Cli, Command};
pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: wavesoil::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}: {message}", path.display())]
    Wav { path: PathBuf, message: String },

    #[error(transparent)]
    Engine(#[from] wavesoil::Error),

    /// A check ran to completion and failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// Line number when the error comes from a text input.
    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Input { source, .. } | CliError::Engine(source) => source.line(),
            _ => None,
        }
    }
}

/// Parses a duration such as `108s`, `500ms`, `2m` or a bare number of
/// seconds into milliseconds.
pub fn parse_duration(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let split = s
        .find(|c: char| !(c.is_ascii_digit() || c == '.'))
        .unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let value: f64 = num.parse().map_err(|_| format!("invalid duration {s:?}"))?;
    let scale = match unit.trim() {
        "" | "s" => 1000.0,
        "ms" => 1.0,
        "m" | "min" => 60_000.0,
        other => return Err(format!("unknown duration unit {other:?}")),
    };
    let ms = value * scale;
    if !ms.is_finite() || ms > u64::MAX as f64 {
        return Err(format!("duration {s:?} out of range"));
    }
    Ok(ms.round() as u64)
}
