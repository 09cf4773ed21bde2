//! Multi-level orchestration.
//!
//! Coarsen until the node count reaches `⌈|N| / max_size⌉` or a level fails
//! to match any pair. The coarsest nodes become the initial partitions, and
//! the assignment is refined at every level on the way back up.

use alloc::vec::Vec;

use crate::coarsen::{coarsen_level, materialize_neighbors, ClusterMap, PairingForest};
use crate::error::Error;
use crate::hgraph::{check_validity, connectivity, Constraints, Hypergraph, Partitioning};
use crate::refine::{project, refine_pass, Move, Selection};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub constraints: Constraints,
    /// Refinement passes per level, at most.
    pub max_rounds: usize,
    /// Histogram batch width during candidate selection.
    pub batch_size: usize,
    /// Reserved. The pipeline has no random choices.
    pub seed: u64,
    /// Coarsening levels allowed before giving up.
    pub max_levels: usize,
}

impl Config {
    pub fn new(constraints: Constraints) -> Self {
        Config {
            constraints,
            max_rounds: 8,
            batch_size: 32,
            seed: 0,
            max_levels: 1024,
        }
    }
}

/// Size of one level of the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    pub nodes: usize,
    pub edges: usize,
    pub pins: usize,
}

/// Milliseconds spent per phase, as reported by the [`Clock`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTimes {
    pub coarsen: f64,
    pub refine: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunStats {
    /// Level 0 is the input hypergraph, the last entry the coarsest level.
    pub levels: Vec<LevelStats>,
    /// Connectivity before refinement and after every applied pass, one
    /// list per level, indexed like `levels`.
    pub connectivity_trace: Vec<Vec<f64>>,
    pub phase_ms: PhaseTimes,
    pub num_partitions: usize,
}

/// Time source for [`RunStats::phase_ms`].
pub trait Clock {
    fn now_ms(&self) -> f64;
}

/// Reports zero for everything, keeping runs byte-for-byte reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_ms(&self) -> f64 {
        0.0
    }
}

/// Read-only view of one refinement pass.
#[derive(Debug)]
pub struct PassRecord<'a> {
    pub level: usize,
    pub round: usize,
    pub graph: &'a Hypergraph,
    pub before: &'a Partitioning,
    pub moves: &'a [Move],
    pub selection: &'a Selection,
    pub after: &'a Partitioning,
}

/// Hooks into the pipeline for instrumentation and checking.
pub trait Observer {
    fn on_coarsen(&mut self, _level: usize, _graph: &Hypergraph, _forest: &PairingForest) {}
    fn on_pass(&mut self, _pass: &PassRecord<'_>) {}
}

impl Observer for () {}

/// Partitions `g` with default instrumentation.
pub fn partition(g: &Hypergraph, cfg: &Config) -> Result<(Partitioning, RunStats), Error> {
    partition_with(g, cfg, &NoClock, &mut ())
}

pub fn partition_with(
    g: &Hypergraph,
    cfg: &Config,
    clock: &dyn Clock,
    observer: &mut dyn Observer,
) -> Result<(Partitioning, RunStats), Error> {
    let c = &cfg.constraints;
    c.check_feasible(g)?;
    if cfg.batch_size == 0 || cfg.max_levels == 0 {
        return Err(Error::BadConstraints);
    }
    let start = clock.now_ms();
    let mut stats = RunStats::default();

    let target = (g.num_nodes() as u64).div_ceil(c.max_size) as usize;
    let mut hierarchy: Vec<(Hypergraph, ClusterMap)> = Vec::new();
    let mut nbrs = materialize_neighbors(g);
    stats.levels.push(level_stats(g));
    loop {
        let current = hierarchy.last().map_or(g, |(h, _)| h);
        if current.num_nodes() <= target {
            break;
        }
        if hierarchy.len() >= cfg.max_levels {
            return Err(Error::MaxLevelsExceeded(cfg.max_levels));
        }
        let level = coarsen_level(current, &nbrs, c, cfg.batch_size)?;
        observer.on_coarsen(hierarchy.len(), current, &level.forest);
        if level.forest.num_matched_pairs() == 0 {
            break;
        }
        let contraction = level.contraction;
        stats.levels.push(level_stats(&contraction.graph));
        nbrs = contraction.neighbors;
        hierarchy.push((contraction.graph, contraction.clusters));
    }
    drop(nbrs);
    let coarsened = clock.now_ms();

    let depth = hierarchy.len();
    stats.connectivity_trace = alloc::vec![Vec::new(); depth + 1];
    let coarsest = hierarchy.last().map_or(g, |(h, _)| h);
    let mut rho = Partitioning::singletons(coarsest.num_nodes());
    for level in (0..=depth).rev() {
        let graph = if level == 0 { g } else { &hierarchy[level - 1].0 };
        if level < depth {
            rho = project(&rho, &hierarchy[level].1);
        }
        let (refined, trace) = refine_level(graph, rho, c, cfg.max_rounds, level, observer);
        rho = refined;
        stats.connectivity_trace[level] = trace;
    }
    let finished = clock.now_ms();

    if !check_validity(g, &rho, c).is_empty() {
        return Err(Error::Invariant("partitioner produced an invalid partitioning"));
    }
    stats.num_partitions = rho.num_parts();
    stats.phase_ms = PhaseTimes {
        coarsen: coarsened - start,
        refine: finished - coarsened,
        total: finished - start,
    };
    Ok((rho, stats))
}

fn level_stats(g: &Hypergraph) -> LevelStats {
    LevelStats {
        nodes: g.num_nodes(),
        edges: g.num_edges(),
        pins: g.num_pins(),
    }
}

/// Repeats refinement passes until one applies nothing or the round
/// budget runs out. Returns the connectivity after every applied pass.
fn refine_level(
    g: &Hypergraph,
    mut rho: Partitioning,
    c: &Constraints,
    max_rounds: usize,
    level: usize,
    observer: &mut dyn Observer,
) -> (Partitioning, Vec<f64>) {
    let mut trace = alloc::vec![connectivity(g, &rho)];
    for round in 0..max_rounds {
        let pass = refine_pass(g, &rho, c);
        observer.on_pass(&PassRecord {
            level,
            round,
            graph: g,
            before: &rho,
            moves: &pass.moves,
            selection: &pass.selection,
            after: &pass.result,
        });
        if pass.selection.apply_count == 0 {
            break;
        }
        rho = pass.result;
        trace.push(connectivity(g, &rho));
    }
    (rho, trace)
}
