//! Multi-level partitioning of weighted directed hypergraphs.
//!
//! Every partition must hold at most `max_size` fine nodes (counted through
//! [`Hypergraph::node_size`]) and at most `max_inbound` distinct hyperedges
//! entering it. Within those limits the partitioner minimizes the
//! connectivity `Σ ω(e)·(λ(e) − 1)`, where `λ(e)` is the number of
//! partitions touched by the pins of `e`.
//!
//! The pipeline is:
//!
//! - [`coarsen`]: materialized neighborhoods, histogram candidate selection,
//!   pseudo-forest matching and contraction,
//! - the coarsest level's nodes become the initial partitions,
//! - [`refine`]: gain-sorted move sequences validated through sparse events,
//!   applied at every level while projecting back to the input hypergraph.
//!
//! [`driver::partition`] runs the whole thing. [`baselines`] and [`oracle`]
//! provide reference partitioners and brute-force checks.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod coarsen;
pub mod csr;
pub mod driver;
mod error;
pub mod hgraph;
pub mod oracle;
pub mod refine;

pub use csr::CsrSets;
pub use driver::{partition, Config, RunStats};
pub use error::{Error, InfeasibleKind};
pub use hgraph::{
    check_validity, connectivity, Constraints, EdgeId, Hypergraph, HypergraphBuilder, NodeId,
    PartId, Partitioning, Violation, ViolationKind,
};
