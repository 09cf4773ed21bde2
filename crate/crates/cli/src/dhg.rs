//! The `.dhg` text format.
//!
//! ```text
//! <numEdges> <numNodes>
//! <weight> <kSrc> <kDst> <src ids ...> <dst ids ...>     (numEdges lines)
//! ```
//!
//! Ids are 0-based decimals separated by single spaces, lines end in `\n`.

use std::fmt::Write as _;
use std::str::FromStr;

use dhgpart_core::{EdgeId, Hypergraph, HypergraphBuilder, NodeId};

use crate::FormatError;

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| FormatError::syntax(line, format!("invalid {what} `{tok}`")))
}

pub fn parse(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (line, header) = lines
        .next()
        .ok_or_else(|| FormatError::syntax(1, "missing header"))?;
    let mut toks = header.split_ascii_whitespace();
    let num_edges: usize = field(toks.next(), line, "edge count")?;
    let num_nodes: usize = field(toks.next(), line, "node count")?;
    if toks.next().is_some() {
        return Err(FormatError::syntax(line, "trailing tokens in header"));
    }

    let mut b = HypergraphBuilder::new(num_nodes);
    let mut src = Vec::new();
    let mut dst = Vec::new();
    for e in 0..num_edges {
        let Some((line, text)) = lines.next() else {
            return Err(FormatError::syntax(
                line + e + 1,
                format!("expected {num_edges} edge lines, found {e}"),
            ));
        };
        let mut toks = text.split_ascii_whitespace();
        let weight: f64 = field(toks.next(), line, "weight")?;
        let k_src: usize = field(toks.next(), line, "source count")?;
        let k_dst: usize = field(toks.next(), line, "destination count")?;
        src.clear();
        for _ in 0..k_src {
            src.push(field::<NodeId>(toks.next(), line, "source id")?);
        }
        dst.clear();
        for _ in 0..k_dst {
            dst.push(field::<NodeId>(toks.next(), line, "destination id")?);
        }
        if toks.next().is_some() {
            return Err(FormatError::syntax(line, "more ids than announced"));
        }
        b.add_edge(weight, &src, &dst)
            .map_err(|source| FormatError::Model { line, source })?;
    }
    if let Some((line, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(FormatError::syntax(line, "content after the last edge"));
    }
    Ok(b.build())
}

pub fn write(g: &Hypergraph) -> String {
    let mut out = String::with_capacity(16 * (g.num_edges() + 1) + 8 * g.num_pins());
    writeln!(out, "{} {}", g.num_edges(), g.num_nodes()).unwrap();
    for e in 0..g.num_edges() as EdgeId {
        let (s, d) = (g.src(e), g.dst(e));
        write!(out, "{} {} {}", g.weight(e), s.len(), d.len()).unwrap();
        for n in s.iter().chain(d) {
            write!(out, " {n}").unwrap();
        }
        out.push('\n');
    }
    out
}
