//! Vertex, edge and split betweenness.
//!
//! All sums run over unordered pairs `{s, t}`; pairs with no connecting
//! path contribute nothing.

mod brandes;
pub mod oracle;
mod snapshot;
mod split;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, InteractionGraph, NodeId};

pub use oracle::{all_shortest_paths, betweenness_bruteforce, DEFAULT_ORACLE_CAP};
pub use split::EXHAUSTIVE_MAX_DEGREE;

use brandes::{accumulate, pair_offsets, tri_index};
use snapshot::Snapshot;
use split::{best_split, PairFlow};

/// Edge length used for shortest paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    /// Every edge has length 1.
    Unit,
    /// Edge length is `1 / weight`, so heavy ties are short.
    InverseWeight,
}

impl FromStr for DistanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(DistanceMode::Unit),
            "inverse-weight" => Ok(DistanceMode::InverseWeight),
            other => Err(Error::Config(format!(
                "unknown distance mode {other:?} (expected unit or inverse-weight)"
            ))),
        }
    }
}

impl fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMode::Unit => "unit",
            DistanceMode::InverseWeight => "inverse-weight",
        })
    }
}

/// Path lengths closer than this (relative, floored at 1) count as equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[inline]
pub(crate) fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BetweennessScores {
    pub vertex: BTreeMap<NodeId, f64>,
    pub edge: BTreeMap<EdgeKey, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub score: f64,
    pub side_a: BTreeSet<NodeId>,
    pub side_b: BTreeSet<NodeId>,
}

/// Best split per vertex of degree ≥ 2.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SplitScores {
    pub best_split: BTreeMap<NodeId, SplitCandidate>,
}

fn scores_from(snap: &Snapshot, vertex: &[f64], edge: &[f64]) -> BetweennessScores {
    BetweennessScores {
        vertex: snap
            .nodes
            .iter()
            .zip(vertex)
            .map(|(v, x)| (*v, x / 2.0))
            .collect(),
        edge: snap
            .edges
            .iter()
            .zip(edge)
            .map(|(e, x)| (*e, x / 2.0))
            .collect(),
    }
}

fn splits_from(snap: &Snapshot, pair: &[f64]) -> SplitScores {
    let off = pair_offsets(snap);
    let mut by_vertex = BTreeMap::new();
    for v in 0..snap.len() {
        let d = snap.degree(v);
        if d < 2 {
            continue;
        }
        let mut flow = PairFlow::new(d);
        for i in 0..d {
            for j in i + 1..d {
                flow.set(i, j, pair[off[v] + tri_index(i, j, d)] / 2.0);
            }
        }
        let (score, side_b) = best_split(&flow);
        let mut cand = SplitCandidate {
            score,
            side_a: BTreeSet::new(),
            side_b: BTreeSet::new(),
        };
        for (i, on_b) in side_b.into_iter().enumerate() {
            let n = snap.nodes[snap.targets[snap.offsets[v] + i]];
            if on_b {
                cand.side_b.insert(n);
            } else {
                cand.side_a.insert(n);
            }
        }
        by_vertex.insert(snap.nodes[v], cand);
    }
    SplitScores {
        best_split: by_vertex,
    }
}

/// Vertex and edge betweenness by per-source shortest paths with
/// dependency accumulation. Sources are processed in parallel on the
/// current rayon pool; results do not depend on the number of workers.
pub fn betweenness(graph: &InteractionGraph, mode: DistanceMode) -> Result<BetweennessScores> {
    let snap = Snapshot::build(graph, mode)?;
    let acc = accumulate(&snap, mode, false);
    Ok(scores_from(&snap, &acc.vertex, &acc.edge))
}

/// Split betweenness of every vertex with at least two neighbors.
pub fn split_betweenness(graph: &InteractionGraph, mode: DistanceMode) -> Result<SplitScores> {
    Ok(analyze(graph, mode, true)?.1.unwrap_or_default())
}

/// Betweenness and, optionally, split scores from a single shortest-path pass.
pub fn analyze(
    graph: &InteractionGraph,
    mode: DistanceMode,
    with_splits: bool,
) -> Result<(BetweennessScores, Option<SplitScores>)> {
    let snap = Snapshot::build(graph, mode)?;
    let acc = accumulate(&snap, mode, with_splits);
    let scores = scores_from(&snap, &acc.vertex, &acc.edge);
    let splits = acc.pair.as_deref().map(|p| splits_from(&snap, p));
    Ok((scores, splits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(u64, u64)]) -> InteractionGraph {
        InteractionGraph::from_weighted_edges(edges.iter().map(|&(a, b)| (a, b, 1.0))).unwrap()
    }

    fn edge_score(g: &InteractionGraph, b: &BetweennessScores, x: u64, y: u64) -> f64 {
        b.edge[&EdgeKey::new(g.primary(x).unwrap(), g.primary(y).unwrap())]
    }

    #[test]
    fn path_of_three() {
        let g = graph(&[(1, 2), (2, 3)]);
        let b = betweenness(&g, DistanceMode::Unit).unwrap();
        assert_eq!(b.vertex[&g.primary(2).unwrap()], 1.0);
        assert_eq!(b.vertex[&g.primary(1).unwrap()], 0.0);
        assert_eq!(edge_score(&g, &b, 1, 2), 2.0);
    }

    #[test]
    fn triangle() {
        let g = graph(&[(1, 2), (2, 3), (1, 3)]);
        let b = betweenness(&g, DistanceMode::Unit).unwrap();
        assert!(b.vertex.values().all(|&x| x == 0.0));
        assert!(b.edge.values().all(|&x| x == 1.0));
    }

    #[test]
    fn bridge_between_triangles_is_max() {
        let g = graph(&[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)]);
        let b = betweenness(&g, DistanceMode::Unit).unwrap();
        let bridge = edge_score(&g, &b, 3, 4);
        assert_eq!(bridge, 9.0);
        assert!(b.edge.values().all(|&x| x <= bridge));
    }

    #[test]
    fn disconnected_pairs_contribute_nothing() {
        let g = graph(&[(1, 2), (3, 4)]);
        let b = betweenness(&g, DistanceMode::Unit).unwrap();
        assert!(b.edge.values().all(|&x| x == 1.0));
        let b = betweenness(&InteractionGraph::new(), DistanceMode::Unit).unwrap();
        assert!(b.vertex.is_empty());
    }

    #[test]
    fn inverse_weight_prefers_heavy_path() {
        // 1-3 direct weight 1 (length 1) vs 1-2-3 with weights 4 (length 0.5)
        let g =
            InteractionGraph::from_weighted_edges([(1, 3, 1.0), (1, 2, 4.0), (2, 3, 4.0)]).unwrap();
        let b = betweenness(&g, DistanceMode::InverseWeight).unwrap();
        assert_eq!(b.vertex[&g.primary(2).unwrap()], 1.0);
        assert_eq!(edge_score(&g, &b, 1, 3), 0.0);
    }

    #[test]
    fn nonpositive_weight_rejected_in_inverse_mode() {
        let mut g = graph(&[(1, 2)]);
        let k = g.edges().next().unwrap().0;
        g.edge_mut(k).unwrap().weight = 0.0;
        assert!(matches!(
            betweenness(&g, DistanceMode::InverseWeight),
            Err(Error::NonPositiveWeight(..))
        ));
        assert!(betweenness(&g, DistanceMode::Unit).is_ok());
    }

    #[test]
    fn split_of_path_middle() {
        let g = graph(&[(1, 2), (2, 3)]);
        let s = split_betweenness(&g, DistanceMode::Unit).unwrap();
        let b = g.primary(2).unwrap();
        assert_eq!(s.best_split.len(), 1);
        let c = &s.best_split[&b];
        assert_eq!(c.score, 1.0);
        assert_eq!(c.side_a, [g.primary(1).unwrap()].into_iter().collect());
        assert_eq!(c.side_b, [g.primary(3).unwrap()].into_iter().collect());
    }

    #[test]
    fn shared_hub_of_two_triangles_splits_them_apart() {
        // v = 0 adjacent to every vertex of triangles {1,2,3} and {4,5,6}
        let mut edges = vec![(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)];
        edges.extend((1..=6).map(|i| (0, i)));
        let g = graph(&edges);
        let s = split_betweenness(&g, DistanceMode::Unit).unwrap();
        let c = &s.best_split[&g.primary(0).unwrap()];
        assert_eq!(c.score, 9.0);
        let left: BTreeSet<NodeId> = (1..=3).map(|i| g.primary(i).unwrap()).collect();
        assert_eq!(c.side_a, left);
    }

    #[test]
    fn distance_mode_strings() {
        assert_eq!("unit".parse::<DistanceMode>().unwrap(), DistanceMode::Unit);
        assert_eq!(
            DistanceMode::InverseWeight
                .to_string()
                .parse::<DistanceMode>()
                .unwrap(),
            DistanceMode::InverseWeight
        );
        assert!("hops".parse::<DistanceMode>().is_err());
    }
}
