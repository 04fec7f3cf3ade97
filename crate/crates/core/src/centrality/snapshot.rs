use std::collections::HashMap;

use crate::centrality::DistanceMode;
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, InteractionGraph, NodeId};

/// Compressed adjacency of an [`InteractionGraph`] with dense indices.
///
/// Slot `k` in `offsets[v]..offsets[v + 1]` is the arc `v -> targets[k]`;
/// `reverse[k]` is the slot of the opposite arc and `edge_of[k]` the dense
/// edge index. Neighbor slots follow node-id order.
pub(crate) struct Snapshot {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeKey>,
    pub offsets: Vec<usize>,
    pub targets: Vec<usize>,
    pub lengths: Vec<f64>,
    pub edge_of: Vec<usize>,
    pub reverse: Vec<usize>,
}

impl Snapshot {
    pub fn build(graph: &InteractionGraph, mode: DistanceMode) -> Result<Self> {
        let nodes: Vec<NodeId> = graph.nodes().collect();
        let index: HashMap<NodeId, usize> =
            nodes.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut edges = Vec::with_capacity(graph.edge_count());
        let mut edge_index = HashMap::with_capacity(graph.edge_count());
        for (key, state) in graph.edges() {
            if mode == DistanceMode::InverseWeight && (state.weight.is_nan() || state.weight <= 0.0)
            {
                return Err(Error::NonPositiveWeight(key.lo(), key.hi(), state.weight));
            }
            edge_index.insert(key, edges.len());
            edges.push(key);
        }

        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        let mut lengths = Vec::with_capacity(2 * edges.len());
        let mut edge_of = Vec::with_capacity(2 * edges.len());
        offsets.push(0);
        for &v in &nodes {
            for n in graph.neighbors(v) {
                targets.push(index[&n]);
                lengths.push(match mode {
                    DistanceMode::Unit => 1.0,
                    DistanceMode::InverseWeight => 1.0 / graph.weight(v, n),
                });
                edge_of.push(edge_index[&EdgeKey::new(v, n)]);
            }
            offsets.push(targets.len());
        }

        let mut reverse = vec![0; targets.len()];
        for v in 0..nodes.len() {
            for k in offsets[v]..offsets[v + 1] {
                let w = targets[k];
                // neighbor lists are sorted by dense index
                let pos = targets[offsets[w]..offsets[w + 1]]
                    .binary_search(&v)
                    .expect("adjacency is symmetric");
                reverse[k] = offsets[w] + pos;
            }
        }

        Ok(Snapshot {
            nodes,
            edges,
            offsets,
            targets,
            lengths,
            edge_of,
            reverse,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}
