//! Batch front-end for the optomechanical memory toolkit.
//!
//! Parses scenario configurations (JSON), runs simulations, sweeps and
//! fits from [`omem_core`], generates seeded synthetic datasets, and
//! writes CSV/JSON artifacts. Identical configuration and seed produce
//! byte-identical output files.
//!
//! All file-facing frequencies are ordinary (Hz); the angular convention
//! of the core never leaks into artifacts.

pub mod config;
pub mod io;
pub mod scenario;
pub mod synth;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A semantic configuration problem, reported with its field path.
    #[error("{path}: {reason}")]
    Config { path: String, reason: String },
    #[error("configuration is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Model or fit failure bubbled up from the core.
    #[error("{0}")]
    Core(String),
    #[error("dataset {path}: {reason}")]
    Dataset { path: String, reason: String },
    #[error("unknown preset '{0}' (expected fig1c, fig2b, fig3b, fig4a, fig4b or fig4c)")]
    UnknownPreset(String),
}

impl CliError {
    pub(crate) fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

/// Files written by one scenario run plus its flat summary record.
#[derive(Debug)]
pub struct RunArtifacts {
    pub files: Vec<PathBuf>,
    pub summary: Vec<(String, serde_json::Value)>,
}
