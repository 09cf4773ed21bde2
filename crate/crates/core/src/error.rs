use core::fmt;

use crate::{EdgeId, NodeId};

/// Which hard limit a single node already exceeds on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleKind {
    /// `node_size(n) > max_size`.
    Size,
    /// `|in(n)| > max_inbound`.
    Inbound,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    NodeOutOfRange { edge: EdgeId, node: NodeId, num_nodes: usize },
    DuplicatePin { edge: EdgeId, node: NodeId },
    EmptyEdge { edge: EdgeId },
    BadWeight { edge: EdgeId, weight: f64 },
    /// A constraint limit is zero.
    BadConstraints,
    /// No partitioning can satisfy the constraints.
    Infeasible {
        node: NodeId,
        kind: InfeasibleKind,
        actual: u64,
        limit: u64,
    },
    /// An assignment vector does not match the hypergraph or leaves a
    /// partition id without members.
    InvalidPartitioning(&'static str),
    /// Brute-force enumeration refused an instance above its size guard.
    TooLarge { nodes: usize, limit: usize },
    MaxLevelsExceeded(usize),
    /// A structural invariant of the pairing forest does not hold.
    Invariant(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NodeOutOfRange { edge, node, num_nodes } => {
                write!(f, "edge {edge} references node {node}, but there are only {num_nodes} nodes")
            }
            Error::DuplicatePin { edge, node } => {
                write!(f, "edge {edge} lists node {node} twice on the same side")
            }
            Error::EmptyEdge { edge } => write!(f, "edge {edge} has no pins"),
            Error::BadWeight { edge, weight } => {
                write!(f, "edge {edge} has invalid weight {weight} (must be finite and >= 0)")
            }
            Error::BadConstraints => f.write_str("constraint limits must be positive"),
            Error::Infeasible { node, kind, actual, limit } => match kind {
                InfeasibleKind::Size => {
                    write!(f, "infeasible: node {node} has size {actual} > max size {limit}")
                }
                InfeasibleKind::Inbound => write!(
                    f,
                    "infeasible: node {node} has {actual} inbound edges > max inbound {limit}"
                ),
            },
            Error::InvalidPartitioning(why) => write!(f, "invalid partitioning: {why}"),
            Error::TooLarge { nodes, limit } => {
                write!(f, "instance has {nodes} nodes, enumeration is limited to {limit}")
            }
            Error::MaxLevelsExceeded(n) => write!(f, "coarsening exceeded {n} levels"),
            Error::Invariant(what) => write!(f, "internal invariant violated: {what}"),
        }
    }
}

impl core::error::Error for Error {}
