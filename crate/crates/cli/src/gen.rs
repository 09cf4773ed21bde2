//! Seeded random `.dhg` instances.
//!
//! Every edge draws between 2 and `max_pins` distinct nodes uniformly; the
//! first drawn node is the source, the rest are destinations. Weights are
//! integers in `1..=4`. Output depends only on the parameters and the seed.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dhgpart_core::{Hypergraph, HypergraphBuilder, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub nodes: usize,
    pub edges: usize,
    pub max_pins: usize,
    pub seed: u64,
}

pub fn generate(p: &GenParams) -> Hypergraph {
    assert!(p.nodes > 0 || p.edges == 0, "edges need at least one node");
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut b = HypergraphBuilder::new(p.nodes);
    let hi = p.max_pins.max(2).min(p.nodes);
    let lo = 2.min(hi);
    for _ in 0..p.edges {
        let k = rng.gen_range(lo..=hi);
        let pins: Vec<NodeId> = sample(&mut rng, p.nodes, k)
            .into_iter()
            .map(|i| i as NodeId)
            .collect();
        let weight = f64::from(rng.gen_range(1u32..=4));
        b.add_edge(weight, &pins[..1], &pins[1..])
            .expect("generated pins are distinct and in range");
    }
    b.build()
}
