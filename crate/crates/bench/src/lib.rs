//! Inputs shared by the benchmarks.

use std::path::PathBuf;

use dyncomm_core::InteractionGraph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Connected random graph: a random tree on `n` ids plus `extra` random
/// chords, weights in 1..=5.
pub fn random_graph(n: u64, extra: usize, seed: u64) -> InteractionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=5) as f64));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a, b, rng.gen_range(1..=5) as f64));
        }
    }
    InteractionGraph::from_weighted_edges(edges).expect("valid edges")
}

pub fn eies_log() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/eies_synthetic.csv")
}
