//! Undirected weighted interaction graph with vertex-split bookkeeping.
//!
//! Every vertex carries the dataset id it stands for (its *origin*). Split
//! copies get fresh ids from a monotone counter but keep their origin, so
//! communities can always be reported in terms of the ingested users.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Node id as it appears in the input data.
pub type DatasetId = u64;

/// Vertex id inside an [`InteractionGraph`]. Unique within a graph, never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey(NodeId, NodeId);

impl EdgeKey {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    pub fn lo(&self) -> NodeId {
        self.0
    }

    pub fn hi(&self) -> NodeId {
        self.1
    }

    pub fn other(&self, v: NodeId) -> NodeId {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Mutable per-edge state: accumulated message intensity and the number of
/// consecutive silent intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeState {
    pub weight: f64,
    pub idle_intervals: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InteractionGraph {
    origins: BTreeMap<NodeId, DatasetId>,
    adjacency: BTreeMap<NodeId, BTreeSet<NodeId>>,
    edges: BTreeMap<EdgeKey, EdgeState>,
    copies: BTreeMap<DatasetId, BTreeSet<NodeId>>,
    next_id: u32,
}

impl InteractionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph with one vertex per dataset id and the given weighted edges.
    pub fn from_weighted_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (DatasetId, DatasetId, f64)>,
    {
        let mut g = Self::new();
        for (a, b, w) in edges {
            let a = g.ensure_origin(a);
            let b = g.ensure_origin(b);
            g.add_message_weight(a, b, w)?;
        }
        Ok(g)
    }

    /// Adds a fresh vertex standing for `origin`.
    pub fn add_node(&mut self, origin: DatasetId) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.origins.insert(id, origin);
        self.adjacency.insert(id, BTreeSet::new());
        self.copies.entry(origin).or_default().insert(id);
        id
    }

    /// Returns the primary (lowest-id) vertex for `origin`, creating one if needed.
    pub fn ensure_origin(&mut self, origin: DatasetId) -> NodeId {
        match self.primary(origin) {
            Some(id) => id,
            None => self.add_node(origin),
        }
    }

    pub fn primary(&self, origin: DatasetId) -> Option<NodeId> {
        self.copies
            .get(&origin)
            .and_then(|c| c.iter().next().copied())
    }

    /// All live vertices standing for `origin`, in id order.
    pub fn copies_of(&self, origin: DatasetId) -> impl Iterator<Item = NodeId> + '_ {
        self.copies.get(&origin).into_iter().flatten().copied()
    }

    /// The edge between any copy of `a` and any copy of `b`, if one exists.
    ///
    /// At most one such edge can exist: splits only move edges, and new
    /// traffic reuses an existing edge before creating one.
    pub fn edge_between_origins(&self, a: DatasetId, b: DatasetId) -> Option<EdgeKey> {
        for u in self.copies_of(a) {
            for v in self.copies_of(b) {
                let key = EdgeKey::new(u, v);
                if self.edges.contains_key(&key) {
                    return Some(key);
                }
            }
        }
        None
    }

    pub fn origin(&self, v: NodeId) -> Option<DatasetId> {
        self.origins.get(&v).copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.origins.contains_key(&v)
    }

    pub fn node_count(&self) -> usize {
        self.origins.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.origins.keys().copied()
    }

    /// Distinct dataset ids with at least one live vertex.
    pub fn origin_ids(&self) -> impl Iterator<Item = DatasetId> + '_ {
        self.copies
            .iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(o, _)| *o)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, &EdgeState)> + '_ {
        self.edges.iter().map(|(k, s)| (*k, s))
    }

    pub fn edge(&self, a: NodeId, b: NodeId) -> Option<&EdgeState> {
        self.edges.get(&EdgeKey::new(a, b))
    }

    pub(crate) fn edge_mut(&mut self, key: EdgeKey) -> Option<&mut EdgeState> {
        self.edges.get_mut(&key)
    }

    /// Current edge weight, or 0 if the edge is absent.
    pub fn weight(&self, a: NodeId, b: NodeId) -> f64 {
        self.edge(a, b).map_or(0.0, |e| e.weight)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().map(|e| e.weight).sum()
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency.get(&v).map_or(0, |n| n.len())
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    /// Reinforces edge `(a, b)` by `amount`, creating it if absent, and
    /// resets its idle counter.
    pub fn add_message_weight(&mut self, a: NodeId, b: NodeId, amount: f64) -> Result<()> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        if !(amount > 0.0 && amount.is_finite()) {
            return Err(Error::NonPositiveAmount(amount));
        }
        self.check_node(a)?;
        self.check_node(b)?;
        let state = self.edges.entry(EdgeKey::new(a, b)).or_insert(EdgeState {
            weight: 0.0,
            idle_intervals: 0,
        });
        state.weight += amount;
        state.idle_intervals = 0;
        self.adjacency.entry(a).or_default().insert(b);
        self.adjacency.entry(b).or_default().insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> Option<EdgeState> {
        let removed = self.edges.remove(&EdgeKey::new(a, b))?;
        if let Some(n) = self.adjacency.get_mut(&a) {
            n.remove(&b);
        }
        if let Some(n) = self.adjacency.get_mut(&b) {
            n.remove(&a);
        }
        Some(removed)
    }

    /// Replaces `v` by two fresh vertices with the same origin. Edges to
    /// `side_a` move to the first copy and edges to `side_b` to the second,
    /// weights and idle counters unchanged. The copies are not connected.
    pub fn split_vertex(
        &mut self,
        v: NodeId,
        side_a: &BTreeSet<NodeId>,
        side_b: &BTreeSet<NodeId>,
    ) -> Result<(NodeId, NodeId)> {
        self.check_node(v)?;
        let invalid = |reason| Error::InvalidSplit { node: v, reason };
        if side_a.is_empty() || side_b.is_empty() {
            return Err(invalid("both sides must be nonempty"));
        }
        if !side_a.is_disjoint(side_b) {
            return Err(invalid("sides overlap"));
        }
        let neighbors = &self.adjacency[&v];
        if side_a.len() + side_b.len() != neighbors.len()
            || !side_a.iter().chain(side_b).all(|n| neighbors.contains(n))
        {
            return Err(invalid("sides must cover exactly the neighbor set"));
        }

        let origin = self.origins[&v];
        let moved: Vec<(NodeId, EdgeState)> = neighbors
            .iter()
            .map(|&n| (n, self.edges[&EdgeKey::new(v, n)]))
            .collect();
        for (n, _) in &moved {
            self.remove_edge(v, *n);
        }
        self.origins.remove(&v);
        self.adjacency.remove(&v);
        if let Some(c) = self.copies.get_mut(&origin) {
            c.remove(&v);
        }

        let first = self.add_node(origin);
        let second = self.add_node(origin);
        for (n, state) in moved {
            let copy = if side_a.contains(&n) { first } else { second };
            self.edges.insert(EdgeKey::new(copy, n), state);
            self.adjacency.entry(copy).or_default().insert(n);
            self.adjacency.entry(n).or_default().insert(copy);
        }
        Ok((first, second))
    }

    /// Connected components over current vertices, each sorted, ordered by
    /// smallest member. Isolated vertices form singleton components.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.nodes() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for n in self.neighbors(v) {
                    if seen.insert(n) {
                        comp.push(n);
                        stack.push(n);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Components mapped to origin ids. Copies of one origin that land in
    /// different components make that origin overlap.
    pub fn connected_components(&self) -> Partition {
        Partition::new(
            self.components()
                .into_iter()
                .map(|c| c.into_iter().map(|v| self.origins[&v]).collect())
                .collect(),
        )
    }

    /// Full consistency scan. Intended for tests and debug assertions.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut degree_sum = 0;
        for (v, ns) in &self.adjacency {
            if !self.origins.contains_key(v) {
                return Err(format!("adjacency entry for dead node {v}"));
            }
            for n in ns {
                if n == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.adjacency.get(n).is_some_and(|m| m.contains(v)) {
                    return Err(format!("asymmetric adjacency {v}->{n}"));
                }
                if !self.edges.contains_key(&EdgeKey::new(*v, *n)) {
                    return Err(format!("adjacency {v}-{n} without edge"));
                }
            }
            degree_sum += ns.len();
        }
        if degree_sum != 2 * self.edges.len() {
            return Err(format!(
                "degree sum {degree_sum} != 2 * edge count {}",
                self.edges.len()
            ));
        }
        for (k, s) in &self.edges {
            if s.weight.is_nan() || s.weight <= 0.0 {
                return Err(format!("edge {k} has weight {}", s.weight));
            }
        }
        for (o, cs) in &self.copies {
            for c in cs {
                if self.origins.get(c) != Some(o) {
                    return Err(format!("copy {c} of {o} has wrong origin"));
                }
            }
        }
        if self.origins.len() != self.copies.values().map(|c| c.len()).sum::<usize>() {
            return Err("copy index out of sync".into());
        }
        Ok(())
    }
}
