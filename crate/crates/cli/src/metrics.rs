//! JSON run report.

use serde::{Deserialize, Serialize};

use dhgpart_core::driver::{LevelStats, RunStats};
use dhgpart_core::{Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub nodes: usize,
    pub edges: usize,
    pub pins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseMs {
    pub coarsen: f64,
    pub refine: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub part: u32,
    pub kind: String,
    pub actual: u64,
    pub limit: u64,
}

impl From<&Violation> for ViolationReport {
    fn from(v: &Violation) -> Self {
        ViolationReport {
            part: v.part,
            kind: kind_name(v.kind).to_string(),
            actual: v.actual,
            limit: v.limit,
        }
    }
}

pub fn kind_name(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::Size => "size",
        ViolationKind::Inbound => "inbound",
    }
}

/// Report written by `partition`, `baseline` and `oracle`.
///
/// `levels` and `connectivity_trace` are empty for methods without a
/// hierarchy. `phase_ms` is all zeros unless timings were requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub method: String,
    pub levels: Vec<Level>,
    pub connectivity_trace: Vec<Vec<f64>>,
    pub phase_ms: PhaseMs,
    pub num_partitions: usize,
    pub connectivity: f64,
    pub valid: bool,
    pub violations: Vec<ViolationReport>,
}

impl Metrics {
    pub fn new(method: &str, num_partitions: usize, connectivity: f64, violations: &[Violation]) -> Self {
        Metrics {
            method: method.to_string(),
            levels: Vec::new(),
            connectivity_trace: Vec::new(),
            phase_ms: PhaseMs { coarsen: 0.0, refine: 0.0, total: 0.0 },
            num_partitions,
            connectivity,
            valid: violations.is_empty(),
            violations: violations.iter().map(ViolationReport::from).collect(),
        }
    }

    pub fn with_stats(mut self, stats: &RunStats) -> Self {
        self.levels = stats
            .levels
            .iter()
            .map(|&LevelStats { nodes, edges, pins }| Level { nodes, edges, pins })
            .collect();
        self.connectivity_trace = stats.connectivity_trace.clone();
        self.phase_ms = PhaseMs {
            coarsen: stats.phase_ms.coarsen,
            refine: stats.phase_ms.refine,
            total: stats.phase_ms.total,
        };
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metrics serialize");
        s.push('\n');
        s
    }
}
