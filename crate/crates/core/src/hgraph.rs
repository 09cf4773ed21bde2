//! Directed hypergraph model, partitionings and the constraint checks.

use alloc::vec;
use alloc::vec::Vec;

use crate::csr::{sorted_union_into, CsrBuilder, CsrSets};
use crate::error::{Error, InfeasibleKind};

pub type NodeId = u32;
pub type EdgeId = u32;
pub type PartId = u32;

/// A weighted directed hypergraph in compressed sparse form.
///
/// Edge pins are split into sources and destinations. Each node keeps its
/// inbound (`in`), outbound (`out`) and incident (`in ∪ out`) edge sets,
/// all sorted by edge id. `node_size` counts how many input nodes a node
/// stands for; it is 1 everywhere on a freshly built hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    num_nodes: usize,
    edge_weight: Vec<f64>,
    edge_src: CsrSets,
    edge_dst: CsrSets,
    edge_pins: CsrSets,
    node_in: CsrSets,
    node_out: CsrSets,
    node_inc: CsrSets,
    node_size: Vec<u64>,
}

impl Hypergraph {
    /// Assembles a hypergraph from per-edge sorted source and destination
    /// sets. Incidence sets are derived by transposition.
    pub(crate) fn from_edge_sets(
        num_nodes: usize,
        edge_weight: Vec<f64>,
        edge_src: CsrSets,
        edge_dst: CsrSets,
        node_size: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(edge_src.len(), edge_weight.len());
        debug_assert_eq!(edge_dst.len(), edge_weight.len());
        debug_assert_eq!(node_size.len(), num_nodes);
        let num_edges = edge_weight.len();

        let mut pins = CsrBuilder::with_capacity(num_edges, edge_src.num_items() + edge_dst.num_items());
        let mut buf = Vec::new();
        for e in 0..num_edges {
            sorted_union_into(edge_src.segment(e), edge_dst.segment(e), &mut buf);
            pins.push_segment(buf.iter().copied());
        }
        let edge_pins = pins.finish();
        let node_in = edge_dst.transpose(num_nodes);
        let node_out = edge_src.transpose(num_nodes);
        let node_inc = edge_pins.transpose(num_nodes);

        Hypergraph {
            num_nodes,
            edge_weight,
            edge_src,
            edge_dst,
            edge_pins,
            node_in,
            node_out,
            node_inc,
            node_size,
        }
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edge_weight.len()
    }

    /// Total number of (edge, node) pin slots, counting a node present on
    /// both sides of an edge once.
    pub fn num_pins(&self) -> usize {
        self.edge_pins.num_items()
    }

    #[inline]
    pub fn weight(&self, e: EdgeId) -> f64 {
        self.edge_weight[e as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.edge_weight
    }

    #[inline]
    pub fn src(&self, e: EdgeId) -> &[NodeId] {
        self.edge_src.segment(e as usize)
    }

    #[inline]
    pub fn dst(&self, e: EdgeId) -> &[NodeId] {
        self.edge_dst.segment(e as usize)
    }

    /// `src(e) ∪ dst(e)`, sorted.
    #[inline]
    pub fn pins(&self, e: EdgeId) -> &[NodeId] {
        self.edge_pins.segment(e as usize)
    }

    #[inline]
    pub fn inbound(&self, n: NodeId) -> &[EdgeId] {
        self.node_in.segment(n as usize)
    }

    #[inline]
    pub fn outbound(&self, n: NodeId) -> &[EdgeId] {
        self.node_out.segment(n as usize)
    }

    /// `in(n) ∪ out(n)`, sorted.
    #[inline]
    pub fn incident(&self, n: NodeId) -> &[EdgeId] {
        self.node_inc.segment(n as usize)
    }

    #[inline]
    pub fn node_size(&self, n: NodeId) -> u64 {
        self.node_size[n as usize]
    }

    pub fn node_sizes(&self) -> &[u64] {
        &self.node_size
    }

    pub fn total_size(&self) -> u64 {
        self.node_size.iter().sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.edge_weight.iter().sum()
    }

    pub fn edge_src_sets(&self) -> &CsrSets {
        &self.edge_src
    }

    pub fn edge_dst_sets(&self) -> &CsrSets {
        &self.edge_dst
    }

    pub fn node_in_sets(&self) -> &CsrSets {
        &self.node_in
    }

    pub fn node_out_sets(&self) -> &CsrSets {
        &self.node_out
    }

    /// Largest `|in(n)|` over all nodes.
    pub fn max_inbound_degree(&self) -> usize {
        (0..self.num_nodes)
            .map(|n| self.node_in.segment_len(n))
            .max()
            .unwrap_or(0)
    }

    /// Full cross-scan of `e ∈ in(n) ⇔ n ∈ dst(e)` and
    /// `e ∈ out(n) ⇔ n ∈ src(e)`, plus sortedness of every set.
    pub fn check_incidence_duality(&self) -> bool {
        let sorted = self.edge_src.is_sorted_sets()
            && self.edge_dst.is_sorted_sets()
            && self.node_in.is_sorted_sets()
            && self.node_out.is_sorted_sets();
        if !sorted {
            return false;
        }
        let forward = (0..self.num_edges() as EdgeId).all(|e| {
            self.dst(e).iter().all(|&n| self.inbound(n).binary_search(&e).is_ok())
                && self.src(e).iter().all(|&n| self.outbound(n).binary_search(&e).is_ok())
        });
        let backward = (0..self.num_nodes as NodeId).all(|n| {
            self.inbound(n).iter().all(|&e| self.dst(e).binary_search(&n).is_ok())
                && self.outbound(n).iter().all(|&e| self.src(e).binary_search(&n).is_ok())
        });
        forward && backward
    }
}

/// Validating builder for [`Hypergraph`].
#[derive(Debug, Clone)]
pub struct HypergraphBuilder {
    num_nodes: usize,
    weights: Vec<f64>,
    src: CsrBuilder,
    dst: CsrBuilder,
    scratch: Vec<u32>,
}

impl HypergraphBuilder {
    pub fn new(num_nodes: usize) -> Self {
        HypergraphBuilder {
            num_nodes,
            weights: Vec::new(),
            src: CsrBuilder::new(),
            dst: CsrBuilder::new(),
            scratch: Vec::new(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.weights.len()
    }

    /// Adds an edge and returns its id. Pins may be given in any order, but
    /// a node may appear at most once on each side.
    pub fn add_edge(&mut self, weight: f64, src: &[NodeId], dst: &[NodeId]) -> Result<EdgeId, Error> {
        let edge = self.weights.len() as EdgeId;
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::BadWeight { edge, weight });
        }
        if src.is_empty() && dst.is_empty() {
            return Err(Error::EmptyEdge { edge });
        }
        for side in [src, dst] {
            self.scratch.clear();
            self.scratch.extend_from_slice(side);
            self.scratch.sort_unstable();
            for w in self.scratch.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicatePin { edge, node: w[0] });
                }
            }
            if let Some(&node) = self.scratch.last() {
                if node as usize >= self.num_nodes {
                    return Err(Error::NodeOutOfRange { edge, node, num_nodes: self.num_nodes });
                }
            }
        }
        let mut s = src.to_vec();
        s.sort_unstable();
        self.src.push_segment(s);
        let mut d = dst.to_vec();
        d.sort_unstable();
        self.dst.push_segment(d);
        self.weights.push(weight);
        Ok(edge)
    }

    pub fn build(self) -> Hypergraph {
        let n = self.num_nodes;
        Hypergraph::from_edge_sets(n, self.weights, self.src.finish(), self.dst.finish(), vec![1; n])
    }
}

/// Hard limits on every partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraints {
    /// Maximum number of input nodes per partition.
    pub max_size: u64,
    /// Maximum number of distinct hyperedges inbound to a partition.
    pub max_inbound: u64,
}

impl Constraints {
    pub fn new(max_size: u64, max_inbound: u64) -> Self {
        Constraints { max_size, max_inbound }
    }

    /// Rejects instances where some node cannot fit even alone.
    pub fn check_feasible(&self, g: &Hypergraph) -> Result<(), Error> {
        if self.max_size == 0 {
            return Err(Error::BadConstraints);
        }
        for n in 0..g.num_nodes() as NodeId {
            let size = g.node_size(n);
            if size > self.max_size {
                return Err(Error::Infeasible {
                    node: n,
                    kind: InfeasibleKind::Size,
                    actual: size,
                    limit: self.max_size,
                });
            }
            let inbound = g.inbound(n).len() as u64;
            if inbound > self.max_inbound {
                return Err(Error::Infeasible {
                    node: n,
                    kind: InfeasibleKind::Inbound,
                    actual: inbound,
                    limit: self.max_inbound,
                });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn size_ok(&self, size: u64) -> bool {
        size <= self.max_size
    }

    #[inline]
    pub fn inbound_ok(&self, inbound: u64) -> bool {
        inbound <= self.max_inbound
    }
}

/// A node → partition assignment with no empty partitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partitioning {
    assign: Vec<PartId>,
    num_parts: usize,
}

impl Partitioning {
    pub fn new(assign: Vec<PartId>, num_parts: usize) -> Result<Self, Error> {
        let mut seen = vec![false; num_parts];
        for &p in &assign {
            match seen.get_mut(p as usize) {
                Some(s) => *s = true,
                None => return Err(Error::InvalidPartitioning("partition id out of range")),
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartitioning("empty partition"));
        }
        Ok(Partitioning { assign, num_parts })
    }

    /// Uses `max id + 1` as the partition count.
    pub fn from_assignment(assign: Vec<PartId>) -> Result<Self, Error> {
        let num_parts = assign.iter().map(|&p| p as usize + 1).max().unwrap_or(0);
        Self::new(assign, num_parts)
    }

    /// Relabels ids so the used ones become `0..k`, keeping their relative
    /// order. Never fails.
    pub fn compact(mut assign: Vec<PartId>) -> Self {
        let bound = assign.iter().map(|&p| p as usize + 1).max().unwrap_or(0);
        let mut used = vec![false; bound];
        for &p in &assign {
            used[p as usize] = true;
        }
        let mut relabel = vec![0 as PartId; bound];
        let mut next = 0;
        for (p, u) in used.iter().enumerate() {
            if *u {
                relabel[p] = next;
                next += 1;
            }
        }
        for p in assign.iter_mut() {
            *p = relabel[*p as usize];
        }
        Partitioning { assign, num_parts: next as usize }
    }

    /// Every node in partition 0.
    pub fn single(num_nodes: usize) -> Self {
        Partitioning {
            assign: vec![0; num_nodes],
            num_parts: usize::from(num_nodes > 0),
        }
    }

    /// Every node in its own partition, with `ρ(n) = n`.
    pub fn singletons(num_nodes: usize) -> Self {
        Partitioning {
            assign: (0..num_nodes as PartId).collect(),
            num_parts: num_nodes,
        }
    }

    #[inline]
    pub fn part(&self, n: NodeId) -> PartId {
        self.assign[n as usize]
    }

    pub fn assignment(&self) -> &[PartId] {
        &self.assign
    }

    pub fn into_assignment(self) -> Vec<PartId> {
        self.assign
    }

    #[inline]
    pub fn num_parts(&self) -> usize {
        self.num_parts
    }

    pub fn num_nodes(&self) -> usize {
        self.assign.len()
    }

    /// Errors unless the assignment covers exactly the nodes of `g`.
    pub fn check_matches(&self, g: &Hypergraph) -> Result<(), Error> {
        if self.assign.len() != g.num_nodes() {
            return Err(Error::InvalidPartitioning("assignment length differs from node count"));
        }
        Ok(())
    }

    /// Σ node_size over the members of each partition.
    pub fn part_sizes(&self, g: &Hypergraph) -> Vec<u64> {
        let mut sizes = vec![0u64; self.num_parts];
        for (n, &p) in self.assign.iter().enumerate() {
            sizes[p as usize] += g.node_size(n as NodeId);
        }
        sizes
    }

    /// `|⋃ in(n)|` over the members of each partition.
    pub fn part_inbound_counts(&self, g: &Hypergraph) -> Vec<u64> {
        // stamp[e] = last partition (+1) that counted edge e
        let mut stamp = vec![0 as PartId; g.num_edges()];
        let mut counts = vec![0u64; self.num_parts];
        let members = self.members();
        for (p, count) in counts.iter_mut().enumerate() {
            let tag = p as PartId + 1;
            for &n in members.segment(p) {
                for &e in g.inbound(n) {
                    if stamp[e as usize] != tag {
                        stamp[e as usize] = tag;
                        *count += 1;
                    }
                }
            }
        }
        counts
    }

    /// Members of every partition, sorted by node id.
    pub fn members(&self) -> CsrSets {
        CsrSets::from_segments(self.assign.iter().map(|&p| [p])).transpose(self.num_parts)
    }
}

/// Weighted cut metric `Σ_e ω(e)·(λ(e) − 1)`.
///
/// Summed in edge id order so the result is reproducible bit for bit.
pub fn connectivity(g: &Hypergraph, rho: &Partitioning) -> f64 {
    let mut stamp = vec![u32::MAX; rho.num_parts()];
    let mut total = 0.0;
    for e in 0..g.num_edges() as EdgeId {
        let mut lambda = 0u32;
        for &n in g.pins(e) {
            let p = rho.part(n) as usize;
            if stamp[p] != e {
                stamp[p] = e;
                lambda += 1;
            }
        }
        if lambda > 1 {
            total += g.weight(e) * f64::from(lambda - 1);
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Size,
    Inbound,
}

/// One partition exceeding one limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub part: PartId,
    pub kind: ViolationKind,
    pub actual: u64,
    pub limit: u64,
}

/// Every violated (partition, limit) pair, ordered by partition then size
/// before inbound. Empty means the partitioning is valid.
pub fn check_validity(g: &Hypergraph, rho: &Partitioning, c: &Constraints) -> Vec<Violation> {
    let sizes = rho.part_sizes(g);
    let inbound = rho.part_inbound_counts(g);
    let mut out = Vec::new();
    for p in 0..rho.num_parts() {
        if !c.size_ok(sizes[p]) {
            out.push(Violation {
                part: p as PartId,
                kind: ViolationKind::Size,
                actual: sizes[p],
                limit: c.max_size,
            });
        }
        if !c.inbound_ok(inbound[p]) {
            out.push(Violation {
                part: p as PartId,
                kind: ViolationKind::Inbound,
                actual: inbound[p],
                limit: c.max_inbound,
            });
        }
    }
    out
}
