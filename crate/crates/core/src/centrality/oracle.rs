//! Brute-force betweenness by explicit shortest-path enumeration.
//!
//! Distances come from Floyd–Warshall and paths are listed one by one, so
//! nothing here shares code with the accumulation method it checks.

use std::collections::BTreeMap;

use crate::centrality::{ties, BetweennessScores, DistanceMode};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, InteractionGraph, NodeId};

pub const DEFAULT_ORACLE_CAP: usize = 64;

pub type PathMap = BTreeMap<(NodeId, NodeId), Vec<Vec<NodeId>>>;

/// Every shortest path of every connected unordered pair `{s, t}`, keyed
/// by `(s, t)` with `s < t`. Paths are listed from `s` to `t`.
pub fn all_shortest_paths(
    graph: &InteractionGraph,
    mode: DistanceMode,
    cap: usize,
) -> Result<PathMap> {
    let nodes: Vec<NodeId> = graph.nodes().collect();
    let n = nodes.len();
    if n > cap {
        return Err(Error::OracleCapExceeded { cap, nodes: n });
    }
    let mut len = vec![vec![f64::INFINITY; n]; n];
    for (key, state) in graph.edges() {
        let i = nodes.binary_search(&key.lo()).unwrap();
        let j = nodes.binary_search(&key.hi()).unwrap();
        let l = match mode {
            DistanceMode::Unit => 1.0,
            DistanceMode::InverseWeight => {
                if state.weight.is_nan() || state.weight <= 0.0 {
                    return Err(Error::NonPositiveWeight(key.lo(), key.hi(), state.weight));
                }
                1.0 / state.weight
            }
        };
        len[i][j] = l;
        len[j][i] = l;
    }
    let mut dist = len.clone();
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }

    let mut out = BTreeMap::new();
    for s in 0..n {
        for t in s + 1..n {
            if dist[s][t].is_infinite() {
                continue;
            }
            let mut paths = Vec::new();
            let mut stack = vec![s];
            extend(&len, &dist, s, t, &mut stack, &mut paths);
            let paths = paths
                .into_iter()
                .map(|p| p.into_iter().map(|i| nodes[i]).collect())
                .collect();
            out.insert((nodes[s], nodes[t]), paths);
        }
    }
    Ok(out)
}

fn extend(
    len: &[Vec<f64>],
    dist: &[Vec<f64>],
    s: usize,
    t: usize,
    stack: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) {
    let v = *stack.last().unwrap();
    if v == t {
        paths.push(stack.clone());
        return;
    }
    for w in 0..len.len() {
        if len[v][w].is_infinite() || stack.contains(&w) {
            continue;
        }
        // w must lie on a shortest s-t path reached through v
        let reach = dist[s][v] + len[v][w];
        if ties(reach, dist[s][w]) && ties(reach + dist[w][t], dist[s][t]) {
            stack.push(w);
            extend(len, dist, s, t, stack, paths);
            stack.pop();
        }
    }
}

/// Same contract as [`crate::centrality::betweenness`], by enumeration.
pub fn betweenness_bruteforce(
    graph: &InteractionGraph,
    mode: DistanceMode,
    cap: usize,
) -> Result<BetweennessScores> {
    let mut scores = BetweennessScores {
        vertex: graph.nodes().map(|v| (v, 0.0)).collect(),
        edge: graph.edges().map(|(k, _)| (k, 0.0)).collect(),
    };
    for paths in all_shortest_paths(graph, mode, cap)?.values() {
        let share = 1.0 / paths.len() as f64;
        for p in paths {
            for v in &p[1..p.len() - 1] {
                *scores.vertex.get_mut(v).unwrap() += share;
            }
            for hop in p.windows(2) {
                *scores.edge.get_mut(&EdgeKey::new(hop[0], hop[1])).unwrap() += share;
            }
        }
    }
    Ok(scores)
}
