//! One coarsening level.
//!
//! Each node picks its heaviest valid neighbor from a histogram of shared
//! edge weight. The resulting pairing graph has out-degree at most one and
//! only two-cycles, so a claim pass toward the cycles followed by a lock
//! pass back toward the leaves yields a matching. Matched pairs are then
//! contracted into the next level's nodes.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::csr::{CsrBuilder, CsrSets};
use crate::error::Error;
use crate::hgraph::{Constraints, Hypergraph, NodeId};

/// Unique neighbors of every node, self excluded, sorted.
pub type NeighborSets = CsrSets;

/// Candidate pairs, their scores and the matching derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingForest {
    /// Best valid neighbor of each node, if any.
    pub pair: Vec<Option<NodeId>>,
    /// `hist(n, pair(n))`, or 0 when there is no candidate.
    pub score: Vec<f64>,
    /// Partner of each node after matching; `matched[n] == n` for singletons.
    pub matched: Vec<NodeId>,
}

impl PairingForest {
    pub fn num_nodes(&self) -> usize {
        self.pair.len()
    }

    /// Number of two-node clusters in `matched`.
    pub fn num_matched_pairs(&self) -> usize {
        self.matched
            .iter()
            .enumerate()
            .filter(|&(n, &m)| (m as usize) > n)
            .count()
    }
}

/// Fine-to-coarse node map. Coarse ids follow the smallest fine member id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    pub gamma: Vec<NodeId>,
    pub num_coarse: usize,
}

impl ClusterMap {
    pub fn identity(num_nodes: usize) -> Self {
        ClusterMap {
            gamma: (0..num_nodes as NodeId).collect(),
            num_coarse: num_nodes,
        }
    }

    #[inline]
    pub fn map(&self, n: NodeId) -> NodeId {
        self.gamma[n as usize]
    }
}

/// `{m ∈ pins(e) | e ∈ I(n)} \ {n}`, deduplicated and sorted, for every node.
pub fn materialize_neighbors(g: &Hypergraph) -> NeighborSets {
    let mut out = CsrBuilder::with_capacity(g.num_nodes(), g.num_pins());
    let mut buf = Vec::new();
    for n in 0..g.num_nodes() as NodeId {
        buf.clear();
        for &e in g.incident(n) {
            buf.extend(g.pins(e).iter().copied().filter(|&m| m != n));
        }
        out.push_set(&mut buf);
    }
    out.finish()
}

/// `|a ∪ b|` for two strictly increasing edge lists: `|a|` plus the members
/// of `b` that a binary search does not find in `a`.
pub fn union_inbound_size(a: &[u32], b: &[u32]) -> usize {
    a.len() + b.iter().filter(|e| a.binary_search(e).is_err()).count()
}

/// Whether `n` and `m` may share a cluster.
#[inline]
pub fn valid_pair(g: &Hypergraph, c: &Constraints, n: NodeId, m: NodeId) -> bool {
    c.size_ok(g.node_size(n) + g.node_size(m))
        && c.inbound_ok(union_inbound_size(g.inbound(n), g.inbound(m)) as u64)
}

/// Histogram key order: larger weight first, then larger id.
#[inline]
fn cmp_key(a: (f64, NodeId), b: (f64, NodeId)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Picks `pair(n)` for every node: the valid neighbor with the largest
/// `hist(n, m) = Σ_{e ∈ I(n), m ∈ e} ω(e)`, larger id on ties.
///
/// Weights are accumulated once per node in edge order into a scratch row
/// indexed by node id. Neighbors are then processed `batch_size` at a time:
/// each batch's bins are extracted best-first, constraint checks run only
/// on extraction, and stop
/// as soon as the remaining bins cannot beat the best valid candidate found
/// in earlier batches. The result does not depend on `batch_size`.
pub fn select_candidates(
    g: &Hypergraph,
    nbrs: &NeighborSets,
    c: &Constraints,
    batch_size: usize,
) -> PairingForest {
    assert!(batch_size >= 1, "batch size must be positive");
    let num_nodes = g.num_nodes();
    let mut pair = vec![None; num_nodes];
    let mut score = vec![0.0; num_nodes];
    let mut acc = vec![0.0f64; num_nodes];
    let mut hist: Vec<f64> = Vec::with_capacity(batch_size);
    let mut keys: Vec<(f64, NodeId)> = Vec::with_capacity(batch_size);

    for n in 0..num_nodes as NodeId {
        let mut best: Option<(f64, NodeId)> = None;
        for &e in g.incident(n) {
            let w = g.weight(e);
            for &m in g.pins(e) {
                acc[m as usize] += w;
            }
        }
        for batch in nbrs.segment(n as usize).chunks(batch_size) {
            hist.clear();
            hist.extend(batch.iter().map(|&m| acc[m as usize]));
            // Bins that cannot beat the current best, or whose size already
            // breaks Ω, are dropped before ordering; the rest are extracted
            // best-first until one passes the inbound check.
            let size_n = g.node_size(n);
            keys.clear();
            keys.extend(
                hist.iter()
                    .zip(batch)
                    .map(|(&h, &m)| (h, m))
                    .filter(|&k| best.is_none_or(|b| cmp_key(k, b) == Ordering::Greater))
                    .filter(|&(_, m)| c.size_ok(size_n + g.node_size(m))),
            );
            keys.sort_unstable_by(|&a, &b| cmp_key(b, a));
            if let Some(&k) = keys.iter().find(|&&(_, m)| valid_pair(g, c, n, m)) {
                best = Some(k);
            }
        }
        for &e in g.incident(n) {
            for &m in g.pins(e) {
                acc[m as usize] = 0.0;
            }
        }
        if let Some((s, m)) = best {
            pair[n as usize] = Some(m);
            score[n as usize] = s;
        }
    }

    PairingForest {
        matched: (0..num_nodes as NodeId).collect(),
        pair,
        score,
    }
}

const UNSET: u32 = u32::MAX;

/// Distance of every node from the root of its pairing-graph component.
///
/// Roots are nodes without a candidate and members of two-cycles. Any
/// longer cycle is an error.
fn forest_depths(pair: &[Option<NodeId>]) -> Result<Vec<u32>, Error> {
    let num_nodes = pair.len();
    let mut depth = vec![UNSET; num_nodes];
    let mut on_path = vec![UNSET; num_nodes];
    let mut path = Vec::new();

    for start in 0..num_nodes {
        if depth[start] != UNSET {
            continue;
        }
        path.clear();
        let mut n = start;
        let base = loop {
            if depth[n] != UNSET {
                break depth[n];
            }
            match pair[n] {
                None => {
                    depth[n] = 0;
                    break 0;
                }
                Some(m) => {
                    let m = m as usize;
                    if m == n {
                        return Err(Error::Invariant("node paired with itself"));
                    }
                    if pair[m] == Some(n as NodeId) {
                        depth[n] = 0;
                        depth[m] = 0;
                        break 0;
                    }
                    if on_path[n] == start as u32 {
                        return Err(Error::Invariant("pairing cycle longer than two"));
                    }
                    on_path[n] = start as u32;
                    path.push(n);
                    n = m;
                }
            }
        };
        for (k, &p) in path.iter().rev().enumerate() {
            depth[p] = base + 1 + k as u32;
        }
    }
    Ok(depth)
}

/// Resolves `forest.pair` into a matching, stored in `forest.matched`.
///
/// Claim pass: every node with a candidate claims it, keeping the claimant
/// with the larger `(score, id)`. A node whose score exceeds its
/// candidate's score breaks monotonicity and loses its claim outright.
/// Two-cycles match by default. Lock pass, from roots outward: a node
/// whose claim on its candidate still stands locks onto it, which in turn
/// invalidates the claims placed on the node itself.
///
/// This is what walks from every leaf to its root and back produce,
/// independently of the order in which leaves are handled.
pub fn match_nodes(forest: &mut PairingForest) -> Result<(), Error> {
    let num_nodes = forest.num_nodes();
    let pair = &forest.pair;
    let score = &forest.score;

    let mut claimant: Vec<Option<NodeId>> = vec![None; num_nodes];
    for n in 0..num_nodes {
        let Some(m) = pair[n] else { continue };
        let mu = m as usize;
        if pair[mu].is_some() && score[n] > score[mu] {
            continue;
        }
        let key = (score[n], n as NodeId);
        let wins = match claimant[mu] {
            None => true,
            Some(c) => cmp_key(key, (score[c as usize], c)) == Ordering::Greater,
        };
        if wins {
            claimant[mu] = Some(n as NodeId);
        }
    }

    let matched = &mut forest.matched;
    for n in 0..num_nodes {
        matched[n] = claimant[n].unwrap_or(n as NodeId);
    }
    for n in 0..num_nodes {
        if let Some(m) = pair[n] {
            if pair[m as usize] == Some(n as NodeId) {
                matched[n] = m;
            }
        }
    }

    let depth = forest_depths(pair)?;
    let max_depth = depth.iter().copied().max().unwrap_or(0) as usize;
    let mut by_depth = vec![Vec::new(); max_depth + 1];
    for (n, &d) in depth.iter().enumerate() {
        if d > 0 {
            by_depth[d as usize].push(n as NodeId);
        }
    }
    for level in by_depth.iter().skip(1) {
        for &n in level {
            let m = pair[n as usize].expect("non-root node has a candidate");
            if matched[m as usize] == n {
                matched[n as usize] = m;
            }
        }
    }

    for n in 0..num_nodes {
        let m = matched[n] as usize;
        if matched[m] as usize != n {
            return Err(Error::Invariant("matching is not an involution"));
        }
    }
    Ok(())
}

/// Output of [`contract`].
#[derive(Debug, Clone, PartialEq)]
pub struct Contraction {
    pub graph: Hypergraph,
    pub neighbors: NeighborSets,
    pub clusters: ClusterMap,
}

/// Cluster map for an involutive matching.
pub fn cluster_map(matched: &[NodeId]) -> ClusterMap {
    let mut gamma = vec![0; matched.len()];
    let mut next = 0;
    for n in 0..matched.len() {
        let m = matched[n] as usize;
        if m >= n {
            gamma[n] = next;
            next += 1;
        } else {
            gamma[n] = gamma[m];
        }
    }
    ClusterMap { gamma, num_coarse: next as usize }
}

/// Builds the next level from a finished matching.
///
/// Edge ids and weights are kept; pins and neighbor sets are mapped through
/// the cluster map and deduplicated. Parallel edges are not merged.
pub fn contract(g: &Hypergraph, nbrs: &NeighborSets, matched: &[NodeId]) -> Contraction {
    let clusters = cluster_map(matched);
    let gamma = &clusters.gamma;
    let num_coarse = clusters.num_coarse;

    let mut buf = Vec::new();
    let mut map_sets = |sets: &CsrSets| {
        let mut out = CsrBuilder::with_capacity(sets.len(), sets.num_items());
        for seg in sets.iter() {
            buf.clear();
            buf.extend(seg.iter().map(|&n| gamma[n as usize]));
            out.push_set(&mut buf);
        }
        out.finish()
    };
    let src = map_sets(g.edge_src_sets());
    let dst = map_sets(g.edge_dst_sets());

    let mut sizes = vec![0u64; num_coarse];
    for n in 0..g.num_nodes() {
        sizes[gamma[n] as usize] += g.node_size(n as NodeId);
    }

    let mut neighbors = CsrBuilder::with_capacity(num_coarse, nbrs.num_items());
    for n in 0..g.num_nodes() {
        let m = matched[n] as usize;
        if m < n {
            continue;
        }
        let coarse = gamma[n];
        buf.clear();
        buf.extend(nbrs.segment(n).iter().map(|&x| gamma[x as usize]));
        if m != n {
            buf.extend(nbrs.segment(m).iter().map(|&x| gamma[x as usize]));
        }
        buf.retain(|&x| x != coarse);
        neighbors.push_set(&mut buf);
    }

    let graph = Hypergraph::from_edge_sets(num_coarse, g.weights().to_vec(), src, dst, sizes);
    Contraction {
        graph,
        neighbors: neighbors.finish(),
        clusters,
    }
}

/// Result of a full coarsening step.
#[derive(Debug, Clone)]
pub struct Level {
    pub forest: PairingForest,
    pub contraction: Contraction,
}

/// Candidate selection, matching and contraction in one call.
pub fn coarsen_level(
    g: &Hypergraph,
    nbrs: &NeighborSets,
    c: &Constraints,
    batch_size: usize,
) -> Result<Level, Error> {
    let mut forest = select_candidates(g, nbrs, c, batch_size);
    match_nodes(&mut forest)?;
    let contraction = contract(g, nbrs, &forest.matched);
    Ok(Level { forest, contraction })
}
