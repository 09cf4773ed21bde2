//! Constraint-only reference partitioners.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::Error;
use crate::hgraph::{Constraints, Hypergraph, NodeId, PartId, Partitioning};

/// Fills partitions in node id order, opening a new one whenever the next
/// node would break a limit.
pub fn one_pass(g: &Hypergraph, c: &Constraints) -> Result<Partitioning, Error> {
    c.check_feasible(g)?;
    let mut assign = Vec::with_capacity(g.num_nodes());
    let mut stamp = vec![0 as PartId; g.num_edges()];
    let mut part: PartId = 0;
    let mut size = 0u64;
    let mut inbound = 0u64;
    for n in 0..g.num_nodes() as NodeId {
        let tag = part + 1;
        let fresh = g.inbound(n).iter().filter(|&&e| stamp[e as usize] != tag).count() as u64;
        let fits = c.size_ok(size + g.node_size(n)) && c.inbound_ok(inbound + fresh);
        if n > 0 && !fits {
            part += 1;
            size = 0;
            inbound = 0;
        }
        let tag = part + 1;
        for &e in g.inbound(n) {
            if stamp[e as usize] != tag {
                stamp[e as usize] = tag;
                inbound += 1;
            }
        }
        size += g.node_size(n);
        assign.push(part);
    }
    Partitioning::from_assignment(assign)
}

/// Grows one partition at a time around the smallest unassigned node.
///
/// The next member is the unassigned node sharing the most incident edges
/// with the partition's incident set (smaller id on ties), among those that
/// keep both limits. A partition closes when no node with positive overlap
/// fits.
pub fn overlap_greedy(g: &Hypergraph, c: &Constraints) -> Result<Partitioning, Error> {
    c.check_feasible(g)?;
    let num_nodes = g.num_nodes();
    const UNASSIGNED: PartId = PartId::MAX;
    let mut assign = vec![UNASSIGNED; num_nodes];
    let mut overlap = vec![0u32; num_nodes];
    let mut excluded = vec![0 as PartId; num_nodes];
    let mut incident_stamp = vec![0 as PartId; g.num_edges()];
    let mut inbound_stamp = vec![0 as PartId; g.num_edges()];
    let mut heap: BinaryHeap<(u32, Reverse<NodeId>)> = BinaryHeap::new();
    let mut touched: Vec<NodeId> = Vec::new();

    let mut part: PartId = 0;
    let mut seed_cursor = 0usize;
    loop {
        while seed_cursor < num_nodes && assign[seed_cursor] != UNASSIGNED {
            seed_cursor += 1;
        }
        if seed_cursor == num_nodes {
            break;
        }
        let tag = part + 1;
        let mut size = 0u64;
        let mut inbound = 0u64;

        let mut next = Some(seed_cursor as NodeId);
        while let Some(n) = next.take() {
            assign[n as usize] = part;
            size += g.node_size(n);
            for &e in g.inbound(n) {
                if inbound_stamp[e as usize] != tag {
                    inbound_stamp[e as usize] = tag;
                    inbound += 1;
                }
            }
            for &e in g.incident(n) {
                if incident_stamp[e as usize] == tag {
                    continue;
                }
                incident_stamp[e as usize] = tag;
                for &m in g.pins(e) {
                    if assign[m as usize] == UNASSIGNED {
                        overlap[m as usize] += 1;
                        touched.push(m);
                        heap.push((overlap[m as usize], Reverse(m)));
                    }
                }
            }

            while let Some((ov, Reverse(m))) = heap.pop() {
                let mu = m as usize;
                if assign[mu] != UNASSIGNED || excluded[mu] == tag || overlap[mu] != ov {
                    continue;
                }
                let fresh = g
                    .inbound(m)
                    .iter()
                    .filter(|&&e| inbound_stamp[e as usize] != tag)
                    .count() as u64;
                if c.size_ok(size + g.node_size(m)) && c.inbound_ok(inbound + fresh) {
                    next = Some(m);
                    break;
                }
                excluded[mu] = tag;
            }
        }

        heap.clear();
        for &m in &touched {
            overlap[m as usize] = 0;
        }
        touched.clear();
        part += 1;
    }
    Partitioning::from_assignment(assign)
}
