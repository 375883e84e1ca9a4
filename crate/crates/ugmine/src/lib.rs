//! File formats, multi-threaded mining and the `ugmine` command line on top
//! of `ugmine-core`.

#![forbid(unsafe_code)]

pub mod cli;
pub mod io;
pub mod parallel;

use std::path::PathBuf;

pub use ugmine_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ugmine_core::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {}: {source}", path.display())]
    MissingInput { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
}

impl Error {
    /// 2 for usage problems and unreadable inputs, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::MissingInput { .. } => 2,
            _ => 1,
        }
    }
}
