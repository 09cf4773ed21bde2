//! Slow, direct reference computations used to check the fast paths.
//!
//! Nothing here shares code with the coarsening or refinement modules:
//! partition contents and inbound sets are rebuilt from scratch with
//! ordered sets.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::hgraph::{Constraints, EdgeId, Hypergraph, NodeId, PartId, Partitioning};
use crate::refine::Move;

/// Largest instance [`brute_force_optimal`] accepts. Bell(10) = 115975.
pub const BRUTE_FORCE_MAX_NODES: usize = 10;

/// Connectivity straight from the definition, with a set of touched
/// partitions per edge.
pub fn naive_connectivity(g: &Hypergraph, assign: &[PartId]) -> f64 {
    let mut total = 0.0;
    for e in 0..g.num_edges() as EdgeId {
        let parts: BTreeSet<PartId> = g
            .src(e)
            .iter()
            .chain(g.dst(e))
            .map(|&n| assign[n as usize])
            .collect();
        total += g.weight(e) * (parts.len() as f64 - 1.0);
    }
    total
}

/// Number of violated (partition, limit) pairs over `num_parts` partition
/// ids. Empty partitions are never in violation.
pub fn naive_violations(g: &Hypergraph, assign: &[PartId], num_parts: usize, c: &Constraints) -> u32 {
    let mut sizes = vec![0u64; num_parts];
    let mut inbound: Vec<BTreeSet<EdgeId>> = vec![BTreeSet::new(); num_parts];
    for (n, &p) in assign.iter().enumerate() {
        sizes[p as usize] += g.node_size(n as NodeId);
        inbound[p as usize].extend(g.inbound(n as NodeId).iter().copied());
    }
    let mut count = 0;
    for p in 0..num_parts {
        count += u32::from(sizes[p] > c.max_size);
        count += u32::from(inbound[p].len() as u64 > c.max_inbound);
    }
    count
}

/// Minimum-connectivity valid partitioning by exhaustive enumeration of
/// set partitions as restricted growth strings.
///
/// Ties resolve to the lexicographically smallest string, so partitions
/// are numbered by their smallest member.
pub fn brute_force_optimal(g: &Hypergraph, c: &Constraints) -> Result<(Partitioning, f64), Error> {
    let n = g.num_nodes();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge { nodes: n, limit: BRUTE_FORCE_MAX_NODES });
    }
    c.check_feasible(g)?;
    let mut search = Search {
        g,
        c,
        assign: vec![0; n],
        sizes: vec![0; n],
        inbound: vec![BTreeSet::new(); n],
        best: None,
    };
    search.visit(0, 0);
    let (assign, value) = search.best.expect("singletons are feasible");
    Ok((Partitioning::from_assignment(assign)?, value))
}

struct Search<'a> {
    g: &'a Hypergraph,
    c: &'a Constraints,
    assign: Vec<PartId>,
    sizes: Vec<u64>,
    inbound: Vec<BTreeSet<EdgeId>>,
    best: Option<(Vec<PartId>, f64)>,
}

impl Search<'_> {
    /// Places node `i` into each of the `used` existing blocks or a new one.
    /// A prefix that already breaks a limit cannot be repaired, so it is cut.
    fn visit(&mut self, i: usize, used: usize) {
        if i == self.assign.len() {
            let value = naive_connectivity(self.g, &self.assign);
            if self.best.as_ref().is_none_or(|(_, b)| value < *b) {
                self.best = Some((self.assign.clone(), value));
            }
            return;
        }
        let node = i as NodeId;
        for p in 0..=used {
            let size = self.sizes[p] + self.g.node_size(node);
            let before = self.inbound[p].clone();
            self.inbound[p].extend(self.g.inbound(node).iter().copied());
            if size <= self.c.max_size && self.inbound[p].len() as u64 <= self.c.max_inbound {
                self.sizes[p] = size;
                self.assign[i] = p as PartId;
                self.visit(i + 1, used.max(p + 1));
                self.sizes[p] -= self.g.node_size(node);
            }
            self.inbound[p] = before;
        }
    }
}

/// State after a prefix of a move sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimStep {
    pub violations: u32,
    pub connectivity: f64,
}

/// Applies `moves` one by one, recomputing violations and connectivity
/// from scratch each time. Entry `j` describes the state after `j` moves.
pub fn simulate_sequence(
    g: &Hypergraph,
    rho0: &Partitioning,
    moves: &[Move],
    c: &Constraints,
) -> Vec<SimStep> {
    let num_parts = moves
        .iter()
        .map(|m| m.to as usize + 1)
        .max()
        .unwrap_or(0)
        .max(rho0.num_parts());
    let mut assign = rho0.assignment().to_vec();
    let mut out = Vec::with_capacity(moves.len() + 1);
    let step = |assign: &[PartId]| SimStep {
        violations: naive_violations(g, assign, num_parts, c),
        connectivity: naive_connectivity(g, assign),
    };
    out.push(step(&assign));
    for m in moves {
        assign[m.node as usize] = m.to;
        out.push(step(&assign));
    }
    out
}
