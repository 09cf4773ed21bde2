//! Import of undirected hMETIS `.hgr` files.
//!
//! Each net's first pin becomes the source and the remaining pins its
//! destinations. Edge weights (`fmt` 1 or 11) are kept; node weights
//! (`fmt` 10 or 11) are read and discarded, since node size is fixed at 1.

use dhgpart_core::{Hypergraph, HypergraphBuilder, NodeId};

use crate::FormatError;

pub fn parse(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (line, header) = lines
        .next()
        .ok_or_else(|| FormatError::syntax(1, "missing header"))?;
    let h: Vec<&str> = header.split_ascii_whitespace().collect();
    if h.len() < 2 || h.len() > 3 {
        return Err(FormatError::syntax(line, "header must be `<nets> <nodes> [fmt]`"));
    }
    let parse_usize = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| FormatError::syntax(line, format!("invalid {what} `{s}`")))
    };
    let num_nets = parse_usize(h[0], "net count")?;
    let num_nodes = parse_usize(h[1], "node count")?;
    let fmt = h.get(2).map_or(Ok(0), |s| parse_usize(s, "format"))?;
    let (edge_weights, node_weights) = match fmt {
        0 => (false, false),
        1 => (true, false),
        10 => (false, true),
        11 => (true, true),
        _ => return Err(FormatError::syntax(line, format!("unknown format {fmt}"))),
    };

    let mut b = HypergraphBuilder::new(num_nodes);
    let mut pins: Vec<NodeId> = Vec::new();
    for e in 0..num_nets {
        let (line, text) = lines
            .next()
            .ok_or_else(|| FormatError::syntax(line + e + 1, "missing net line"))?;
        let mut toks = text.split_ascii_whitespace();
        let weight = if edge_weights {
            let t = toks.next().unwrap_or("");
            t.parse::<f64>()
                .map_err(|_| FormatError::syntax(line, format!("invalid weight `{t}`")))?
        } else {
            1.0
        };
        pins.clear();
        for t in toks {
            let id: NodeId = t
                .parse()
                .map_err(|_| FormatError::syntax(line, format!("invalid node id `{t}`")))?;
            if id == 0 {
                return Err(FormatError::syntax(line, "hMETIS node ids start at 1"));
            }
            pins.push(id - 1);
        }
        // hMETIS allows repeated pins; keep the first occurrence.
        let mut seen = std::collections::HashSet::new();
        pins.retain(|p| seen.insert(*p));
        let (src, dst) = pins.split_at(pins.len().min(1));
        b.add_edge(weight, src, dst)
            .map_err(|source| FormatError::Model { line, source })?;
    }
    if node_weights {
        for _ in 0..num_nodes {
            if lines.next().is_none() {
                break;
            }
        }
    }
    Ok(b.build())
}
