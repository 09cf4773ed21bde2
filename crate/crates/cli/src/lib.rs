//! File formats, a seeded instance generator and the `dhgpart` command line
//! on top of [`dhgpart_core`].

pub mod cli;
pub mod dhg;
pub mod gen;
pub mod hgr;
pub mod metrics;
pub mod partfile;

use std::io;
use std::path::PathBuf;

pub use dhgpart_core as core;

/// Errors from the text formats, carrying the 1-based line they occur on.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Model {
        line: usize,
        #[source]
        source: dhgpart_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl FormatError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Syntax { line, msg: msg.into() }
    }
}
