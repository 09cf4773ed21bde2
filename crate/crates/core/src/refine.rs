//! One refinement pass at one level.
//!
//! Every node proposes its best single move in isolation. Proposals are
//! sorted by gain into a sequence, each move's gain is corrected for the
//! moves before it, and constraint validity of every prefix is derived from
//! sparse events instead of materialized states. The best valid prefix is
//! applied.

use alloc::vec;
use alloc::vec::Vec;

use crate::coarsen::ClusterMap;
use crate::hgraph::{Constraints, EdgeId, Hypergraph, NodeId, PartId, Partitioning};

/// Pins each edge holds in each partition.
///
/// Stored sparsely: edge `e` keeps one entry per partition it touches,
/// sorted by partition id. Missing entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinsMatrix {
    num_parts: usize,
    offsets: Vec<usize>,
    entries: Vec<PinCount>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PinCount {
    pub part: PartId,
    /// `|{n ∈ pins(e) | ρ(n) = part}|`
    pub pins: u32,
    /// `|{n ∈ dst(e) | ρ(n) = part}|`
    pub pins_in: u32,
}

impl PinsMatrix {
    pub fn num_parts(&self) -> usize {
        self.num_parts
    }

    pub fn num_edges(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Non-zero entries of edge `e`.
    #[inline]
    pub fn row(&self, e: EdgeId) -> &[PinCount] {
        &self.entries[self.offsets[e as usize]..self.offsets[e as usize + 1]]
    }

    #[inline]
    fn entry(&self, p: PartId, e: EdgeId) -> Option<&PinCount> {
        let row = self.row(e);
        row.binary_search_by_key(&p, |c| c.part).ok().map(|i| &row[i])
    }

    #[inline]
    pub fn pins(&self, p: PartId, e: EdgeId) -> u32 {
        self.entry(p, e).map_or(0, |c| c.pins)
    }

    #[inline]
    pub fn pins_in(&self, p: PartId, e: EdgeId) -> u32 {
        self.entry(p, e).map_or(0, |c| c.pins_in)
    }

    /// `|{e | pins_in(p, e) > 0}|` for every partition.
    pub fn distinct_inbound(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.num_parts];
        for c in &self.entries {
            if c.pins_in > 0 {
                out[c.part as usize] += 1;
            }
        }
        out
    }
}

/// One pass over the edges mapping every pin to its partition.
pub fn compute_pins(g: &Hypergraph, rho: &Partitioning) -> PinsMatrix {
    let mut offsets = Vec::with_capacity(g.num_edges() + 1);
    offsets.push(0);
    let mut entries: Vec<PinCount> = Vec::with_capacity(g.num_pins());
    let mut buf: Vec<(PartId, bool)> = Vec::new();
    for e in 0..g.num_edges() as EdgeId {
        buf.clear();
        let dst = g.dst(e);
        for &n in g.pins(e) {
            buf.push((rho.part(n), dst.binary_search(&n).is_ok()));
        }
        buf.sort_unstable();
        let start = entries.len();
        for &(p, inbound) in &buf {
            match entries[start..].last_mut() {
                Some(last) if last.part == p => {
                    last.pins += 1;
                    last.pins_in += u32::from(inbound);
                }
                _ => entries.push(PinCount {
                    part: p,
                    pins: 1,
                    pins_in: u32::from(inbound),
                }),
            }
        }
        offsets.push(entries.len());
    }
    PinsMatrix {
        num_parts: rho.num_parts(),
        offsets,
        entries,
    }
}

/// A proposed relocation of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Move {
    pub node: NodeId,
    pub from: PartId,
    pub to: PartId,
    /// Connectivity reduction if this were the only move.
    pub gain_iso: f64,
    /// Connectivity reduction given every earlier move in the sequence.
    pub gain_seq: f64,
    pub seq_index: usize,
}

/// `saving(n) − loss(n, p)` for every admissible target, keeping the best.
///
/// Targets already too full to take the node are skipped. A node proposes
/// only when its best gain is strictly positive; ties go to the smaller
/// partition id. Partitions sharing no edge with the node can never win,
/// since their loss is the node's whole incident weight.
pub fn propose_moves(
    g: &Hypergraph,
    rho: &Partitioning,
    pins: &PinsMatrix,
    part_sizes: &[u64],
    c: &Constraints,
) -> Vec<Move> {
    let mut moves = Vec::new();
    let mut targets: Vec<PartId> = Vec::new();
    // covered[p]: weight of n's incident edges that already touch p.
    let mut covered = vec![0.0f64; pins.num_parts()];
    let mut is_target = vec![false; pins.num_parts()];
    for n in 0..g.num_nodes() as NodeId {
        let from = rho.part(n);
        let size = g.node_size(n);

        let mut saving = 0.0;
        let mut incident_weight = 0.0;
        targets.clear();
        for &e in g.incident(n) {
            let w = g.weight(e);
            incident_weight += w;
            for entry in pins.row(e) {
                let p = entry.part;
                if p == from {
                    if entry.pins == 1 {
                        saving += w;
                    }
                } else if c.size_ok(part_sizes[p as usize] + size) {
                    if !is_target[p as usize] {
                        is_target[p as usize] = true;
                        targets.push(p);
                    }
                    covered[p as usize] += w;
                }
            }
        }
        targets.sort_unstable();

        let mut best: Option<(f64, PartId)> = None;
        for &p in &targets {
            let loss = incident_weight - covered[p as usize];
            covered[p as usize] = 0.0;
            is_target[p as usize] = false;
            let gain = saving - loss;
            if best.is_none_or(|(b, _)| gain > b) {
                best = Some((gain, p));
            }
        }
        if let Some((gain, to)) = best {
            if gain > 0.0 {
                moves.push(Move {
                    node: n,
                    from,
                    to,
                    gain_iso: gain,
                    gain_seq: gain,
                    seq_index: 0,
                });
            }
        }
    }
    moves
}

/// Orders moves by descending in-isolation gain, smaller node first on
/// ties, and numbers them.
pub fn sort_moves(moves: &mut [Move]) {
    moves.sort_unstable_by(|a, b| b.gain_iso.total_cmp(&a.gain_iso).then(a.node.cmp(&b.node)));
    for (i, m) in moves.iter_mut().enumerate() {
        m.seq_index = i;
    }
}

/// Corrects every move's gain for the moves placed before it.
///
/// For move `n: s → d` and each incident edge `e`, only earlier movers
/// among the pins of `e` matter:
///
/// - `−ω(e)` if the earlier moves empty `d` of `e`'s pins
///   (`#{from = d} − #{to = d} = pins(d, e) > 0`), or if `n` was alone in
///   `s` and someone moved into `s`;
/// - `+ω(e)` if the earlier moves leave `n` alone in `s`
///   (`#{from = s} − #{to = s} = pins(s, e) − 1 > 0`), or if `d` held no
///   pin and someone moved into `d`.
pub fn in_sequence_gains(g: &Hypergraph, moves: &mut [Move], pins: &PinsMatrix) {
    const NONE: usize = usize::MAX;
    let mut seq = vec![NONE; g.num_nodes()];
    let mut dest = vec![0 as PartId; g.num_nodes()];
    let mut src = vec![0 as PartId; g.num_nodes()];
    for m in moves.iter() {
        seq[m.node as usize] = m.seq_index;
        dest[m.node as usize] = m.to;
        src[m.node as usize] = m.from;
    }

    for mv in moves.iter_mut() {
        let (s, d, idx) = (mv.from, mv.to, mv.seq_index);
        let mut gain = mv.gain_iso;
        for &e in g.incident(mv.node) {
            let (mut from_d, mut to_d, mut from_s, mut to_s) = (0u32, 0u32, 0u32, 0u32);
            for &m in g.pins(e) {
                let k = seq[m as usize];
                if k == NONE || k >= idx {
                    continue;
                }
                let (ms, md) = (src[m as usize], dest[m as usize]);
                from_d += u32::from(ms == d);
                to_d += u32::from(md == d);
                from_s += u32::from(ms == s);
                to_s += u32::from(md == s);
            }
            let pins_d = pins.pins(d, e);
            let pins_s = pins.pins(s, e);
            let w = g.weight(e);
            if pins_d > 0 && from_d.checked_sub(to_d) == Some(pins_d) {
                gain -= w;
            }
            if pins_s == 1 && to_s > 0 {
                gain -= w;
            }
            if pins_s > 1 && from_s.checked_sub(to_s) == Some(pins_s - 1) {
                gain += w;
            }
            if pins_d == 0 && to_d > 0 {
                gain += w;
            }
        }
        mv.gain_seq = gain;
    }
}

/// Partition size change `(p, idx, delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SizeEvent {
    pub part: PartId,
    pub idx: usize,
    pub delta: i64,
}

/// `pins_in(p, e)` change `(p, e, idx, ±1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PinEvent {
    pub part: PartId,
    pub edge: EdgeId,
    pub idx: usize,
    pub delta: i32,
}

/// Distinct-inbound count change `(p, idx, ±1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DistinctEvent {
    pub part: PartId,
    pub idx: usize,
    pub delta: i32,
}

/// A constraint track turning invalid (`+1`) or valid again (`-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ViolationEvent {
    pub idx: usize,
    pub delta: i32,
}

/// Sorted event lists for one move sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventStream {
    pub size_events: Vec<SizeEvent>,
    pub pin_events: Vec<PinEvent>,
    pub distinct_events: Vec<DistinctEvent>,
    pub violation_events: Vec<ViolationEvent>,
    /// Violated (partition, constraint) tracks before any move.
    pub base_violations: u32,
}

/// Applies `on_change(idx, value_after)` to the last event of every
/// `(key, idx)` run of a sorted event list, after a running sum seeded per
/// key by `base(key)`.
fn segmented_scan<K: PartialEq + Copy>(
    events: impl Iterator<Item = (K, usize, i64)>,
    base: impl Fn(K) -> i64,
    mut on_change: impl FnMut(K, usize, i64, i64),
) {
    let mut events = events.peekable();
    let mut current: Option<(K, i64)> = None;
    while let Some((key, idx, delta)) = events.next() {
        let before = match current {
            Some((k, v)) if k == key => v,
            _ => base(key),
        };
        let mut after = before + delta;
        while let Some(&(k2, i2, d2)) = events.peek() {
            if k2 == key && i2 == idx {
                after += d2;
                events.next();
            } else {
                break;
            }
        }
        on_change(key, idx, before, after);
        current = Some((key, after));
    }
}

/// Emits validity transitions of one constraint track per partition.
fn track_violations(
    states: impl Iterator<Item = (PartId, usize, i64, i64)>,
    ok: impl Fn(i64) -> bool,
    out: &mut Vec<ViolationEvent>,
) {
    for (_, idx, before, after) in states {
        match (ok(before), ok(after)) {
            (true, false) => out.push(ViolationEvent { idx, delta: 1 }),
            (false, true) => out.push(ViolationEvent { idx, delta: -1 }),
            _ => {}
        }
    }
}

/// Builds the event stream of a sorted move sequence.
///
/// `part_sizes` and `part_inbound` describe the state before the first
/// move. Size events carry `±node_size`, since one coarse node may stand
/// for several input nodes.
pub fn build_events(
    g: &Hypergraph,
    moves: &[Move],
    pins: &PinsMatrix,
    part_sizes: &[u64],
    part_inbound: &[u64],
    c: &Constraints,
) -> EventStream {
    let mut size_events = Vec::with_capacity(2 * moves.len());
    let mut pin_events = Vec::new();
    for (idx, m) in moves.iter().enumerate() {
        let size = g.node_size(m.node) as i64;
        size_events.push(SizeEvent { part: m.from, idx, delta: -size });
        size_events.push(SizeEvent { part: m.to, idx, delta: size });
        for &e in g.inbound(m.node) {
            pin_events.push(PinEvent { part: m.from, edge: e, idx, delta: -1 });
            pin_events.push(PinEvent { part: m.to, edge: e, idx, delta: 1 });
        }
    }
    size_events.sort_unstable();
    pin_events.sort_unstable();

    let mut distinct_events = Vec::new();
    segmented_scan(
        pin_events.iter().map(|ev| ((ev.part, ev.edge), ev.idx, i64::from(ev.delta))),
        |(p, e)| i64::from(pins.pins_in(p, e)),
        |(p, _), idx, before, after| {
            if before > 0 && after == 0 {
                distinct_events.push(DistinctEvent { part: p, idx, delta: -1 });
            } else if before == 0 && after > 0 {
                distinct_events.push(DistinctEvent { part: p, idx, delta: 1 });
            }
        },
    );
    distinct_events.sort_unstable();

    let mut violation_events = Vec::new();
    let mut size_states = Vec::new();
    segmented_scan(
        size_events.iter().map(|ev| (ev.part, ev.idx, ev.delta)),
        |p| part_sizes[p as usize] as i64,
        |p, idx, before, after| size_states.push((p, idx, before, after)),
    );
    track_violations(
        size_states.into_iter(),
        |v| c.size_ok(v as u64),
        &mut violation_events,
    );
    let mut inbound_states = Vec::new();
    segmented_scan(
        distinct_events.iter().map(|ev| (ev.part, ev.idx, i64::from(ev.delta))),
        |p| part_inbound[p as usize] as i64,
        |p, idx, before, after| inbound_states.push((p, idx, before, after)),
    );
    track_violations(
        inbound_states.into_iter(),
        |v| c.inbound_ok(v as u64),
        &mut violation_events,
    );
    violation_events.sort_unstable();

    let base_violations = part_sizes.iter().filter(|&&s| !c.size_ok(s)).count()
        + part_inbound.iter().filter(|&&s| !c.inbound_ok(s)).count();

    EventStream {
        size_events,
        pin_events,
        distinct_events,
        violation_events,
        base_violations: base_violations as u32,
    }
}

impl EventStream {
    /// Active violations after each move: entry `idx` describes the state
    /// once moves `0..=idx` are applied.
    pub fn active_violations(&self, num_moves: usize) -> Vec<u32> {
        let mut per_idx = vec![0i64; num_moves];
        for ev in &self.violation_events {
            per_idx[ev.idx] += i64::from(ev.delta);
        }
        let mut running = i64::from(self.base_violations);
        per_idx
            .into_iter()
            .map(|d| {
                running += d;
                debug_assert!(running >= 0);
                running as u32
            })
            .collect()
    }
}

/// Outcome of choosing the best valid prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Number of leading moves to apply.
    pub apply_count: usize,
    /// Σ gain_seq over those moves.
    pub total_gain: f64,
    /// See [`EventStream::active_violations`].
    pub active_violations: Vec<u32>,
    /// Running Σ gain_seq; entry `idx` covers moves `0..=idx`.
    pub cumulative_gain: Vec<f64>,
}

/// Longest-gain valid prefix: the prefix length with maximum cumulative
/// in-sequence gain among prefixes with no active violation. The empty
/// prefix competes with gain 0 and ties favor fewer moves.
pub fn select_prefix(moves: &[Move], active_violations: &[u32], base_violations: u32) -> Selection {
    let mut cumulative_gain = Vec::with_capacity(moves.len());
    let mut running = 0.0;
    for m in moves {
        running += m.gain_seq;
        cumulative_gain.push(running);
    }
    let mut best = (0usize, 0.0f64);
    let empty_valid = base_violations == 0;
    let mut have_best = empty_valid;
    for (idx, (&gain, &active)) in cumulative_gain.iter().zip(active_violations).enumerate() {
        if active == 0 && (!have_best || gain > best.1) {
            best = (idx + 1, gain);
            have_best = true;
        }
    }
    Selection {
        apply_count: best.0,
        total_gain: best.1,
        active_violations: active_violations.to_vec(),
        cumulative_gain,
    }
}

/// Event construction followed by prefix selection.
pub fn build_events_and_select(
    g: &Hypergraph,
    moves: &[Move],
    pins: &PinsMatrix,
    part_sizes: &[u64],
    part_inbound: &[u64],
    c: &Constraints,
) -> Selection {
    let events = build_events(g, moves, pins, part_sizes, part_inbound, c);
    let active = events.active_violations(moves.len());
    select_prefix(moves, &active, events.base_violations)
}

/// Reassigns the nodes of the first `k` moves. Partitions left empty are
/// dropped and the remaining ids compacted in order.
pub fn apply_moves(rho: &Partitioning, moves: &[Move], k: usize) -> Partitioning {
    let mut assign = rho.assignment().to_vec();
    for m in &moves[..k] {
        assign[m.node as usize] = m.to;
    }
    Partitioning::compact(assign)
}

/// Pulls a coarse partitioning back to the finer level.
pub fn project(rho_coarse: &Partitioning, clusters: &ClusterMap) -> Partitioning {
    let assign = clusters.gamma.iter().map(|&c| rho_coarse.part(c)).collect();
    Partitioning::new(assign, rho_coarse.num_parts())
        .expect("every coarse node has at least one fine member")
}

/// Everything one pass computed.
#[derive(Debug, Clone)]
pub struct Pass {
    pub moves: Vec<Move>,
    pub selection: Selection,
    pub result: Partitioning,
}

/// Propose, sequence, validate and apply once.
pub fn refine_pass(g: &Hypergraph, rho: &Partitioning, c: &Constraints) -> Pass {
    let pins = compute_pins(g, rho);
    let sizes = rho.part_sizes(g);
    let inbound = pins.distinct_inbound();
    let mut moves = propose_moves(g, rho, &pins, &sizes, c);
    sort_moves(&mut moves);
    in_sequence_gains(g, &mut moves, &pins);
    let selection = build_events_and_select(g, &moves, &pins, &sizes, &inbound, c);
    let result = apply_moves(rho, &moves, selection.apply_count);
    Pass { moves, selection, result }
}
