//! Partition files: line `i` holds the partition id of node `i`.

use std::fmt::Write as _;

use dhgpart_core::PartId;

use crate::FormatError;

pub fn write(assign: &[PartId]) -> String {
    let mut out = String::with_capacity(assign.len() * 4);
    for p in assign {
        writeln!(out, "{p}").unwrap();
    }
    out
}

/// Reads raw ids; gaps in the id range are allowed here.
pub fn parse(text: &str) -> Result<Vec<PartId>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse()
                .map_err(|_| FormatError::syntax(i + 1, format!("invalid partition id `{}`", l.trim())))
        })
        .collect()
}
