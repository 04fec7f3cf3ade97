#![allow(dead_code)]

use std::collections::BTreeSet;

use dyncomm_core::InteractionGraph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph on `n` dataset ids 0..n: a random spanning tree
/// plus each remaining pair with probability `p`. Weights drawn from a
/// small integer set so inverse-weight ties actually occur.
pub fn random_connected(rng: &mut impl Rng, n: u64, p: f64) -> InteractionGraph {
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    let mut g = InteractionGraph::new();
    for v in 0..n {
        g.add_node(v);
    }
    for (a, b) in edges {
        let w = *[1.0, 2.0, 3.0, 4.0].choose(rng).unwrap();
        g.add_message_weight(g.primary(a).unwrap(), g.primary(b).unwrap(), w)
            .unwrap();
    }
    g
}

pub fn random_tree(rng: &mut impl Rng, n: u64) -> InteractionGraph {
    let mut g = InteractionGraph::new();
    for v in 0..n {
        g.add_node(v);
    }
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_message_weight(g.primary(u).unwrap(), g.primary(v).unwrap(), 1.0)
            .unwrap();
    }
    g
}

pub fn clique(ids: &[u64]) -> Vec<(u64, u64, f64)> {
    let mut out = Vec::new();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            out.push((a, b, 1.0));
        }
    }
    out
}

pub fn bridged_cliques() -> InteractionGraph {
    let mut e = clique(&[1, 2, 3, 4]);
    e.extend(clique(&[5, 6, 7, 8]));
    e.push((4, 5, 1.0));
    InteractionGraph::from_weighted_edges(e).unwrap()
}
