//! Single-source shortest paths with dependency accumulation.
//!
//! Each source contributes ordered pairs `(s, t)`; the caller halves the
//! totals to get the unordered-pair convention.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::centrality::snapshot::Snapshot;
use crate::centrality::{ties, DistanceMode};

/// Sources per work unit. Fixed so that the summation order, and hence
/// every floating-point result, is independent of the worker count.
const SOURCES_PER_BLOCK: usize = 16;
/// Work units evaluated in parallel before their partial sums are merged.
const BLOCKS_PER_WAVE: usize = 32;

pub(crate) struct Accumulated {
    pub vertex: Vec<f64>,
    pub edge: Vec<f64>,
    /// Per-vertex flattened upper triangle over neighbor slots; see
    /// [`pair_offsets`].
    pub pair: Option<Vec<f64>>,
}

/// Start of each vertex's block in the flattened pair table.
pub(crate) fn pair_offsets(snap: &Snapshot) -> Vec<usize> {
    let mut out = Vec::with_capacity(snap.len() + 1);
    let mut acc = 0;
    out.push(0);
    for v in 0..snap.len() {
        let d = snap.degree(v);
        acc += d * d.saturating_sub(1) / 2;
        out.push(acc);
    }
    out
}

/// Index of the unordered slot pair `{i, j}` (i != j) in a triangle of
/// side `d`.
#[inline]
pub(crate) fn tri_index(i: usize, j: usize, d: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * d - i - 1) / 2 + (j - i - 1)
}

struct Sssp {
    order: Vec<usize>,
    sigma: Vec<f64>,
    /// Per node: slots (in that node's adjacency) of arcs to predecessors.
    preds: Vec<Vec<usize>>,
    delta: Vec<f64>,
}

impl Sssp {
    fn new(n: usize) -> Self {
        Sssp {
            order: Vec::with_capacity(n),
            sigma: vec![0.0; n],
            preds: vec![Vec::new(); n],
            delta: vec![0.0; n],
        }
    }

    fn reset(&mut self) {
        self.order.clear();
        self.sigma.iter_mut().for_each(|x| *x = 0.0);
        self.preds.iter_mut().for_each(Vec::clear);
        self.delta.iter_mut().for_each(|x| *x = 0.0);
    }
}

fn bfs(snap: &Snapshot, s: usize, st: &mut Sssp) {
    let mut dist = vec![usize::MAX; snap.len()];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    st.sigma[s] = 1.0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        st.order.push(v);
        for k in snap.offsets[v]..snap.offsets[v + 1] {
            let w = snap.targets[k];
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                st.sigma[w] += st.sigma[v];
                st.preds[w].push(snap.reverse[k]);
            }
        }
    }
}

#[derive(PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then on index
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(snap: &Snapshot, s: usize, st: &mut Sssp) {
    let n = snap.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    st.sigma[s] = 1.0;
    heap.push(HeapEntry(0.0, s));
    while let Some(HeapEntry(d, v)) = heap.pop() {
        if settled[v] || d > dist[v] {
            continue;
        }
        settled[v] = true;
        st.order.push(v);
        for k in snap.offsets[v]..snap.offsets[v + 1] {
            let w = snap.targets[k];
            if settled[w] {
                continue;
            }
            let nd = dist[v] + snap.lengths[k];
            if dist[w].is_infinite() || (nd < dist[w] && !ties(nd, dist[w])) {
                dist[w] = nd;
                st.sigma[w] = st.sigma[v];
                st.preds[w].clear();
                st.preds[w].push(snap.reverse[k]);
                heap.push(HeapEntry(nd, w));
            } else if ties(nd, dist[w]) {
                st.sigma[w] += st.sigma[v];
                st.preds[w].push(snap.reverse[k]);
            }
        }
    }
}

fn accumulate_source(
    snap: &Snapshot,
    mode: DistanceMode,
    s: usize,
    st: &mut Sssp,
    out: &mut Accumulated,
    pair_off: &[usize],
) {
    st.reset();
    match mode {
        DistanceMode::Unit => bfs(snap, s, st),
        DistanceMode::InverseWeight => dijkstra(snap, s, st),
    }
    for &w in st.order.iter().rev() {
        let coeff = (1.0 + st.delta[w]) / st.sigma[w];
        for &slot in &st.preds[w] {
            let v = snap.targets[slot];
            let c = st.sigma[v] * coeff;
            out.edge[snap.edge_of[slot]] += c;
            st.delta[v] += c;
        }
        if w != s {
            out.vertex[w] += st.delta[w];
        }
    }

    if let Some(pair) = out.pair.as_mut() {
        // flow entering v from u and leaving towards w, summed over targets:
        // sigma[u] * (1 + delta[w]) / sigma[w]
        for &w in &st.order {
            let coeff = (1.0 + st.delta[w]) / st.sigma[w];
            for &slot_w in &st.preds[w] {
                let v = snap.targets[slot_w];
                let d = snap.degree(v);
                let out_slot = snap.reverse[slot_w] - snap.offsets[v];
                for &slot_v in &st.preds[v] {
                    let u = snap.targets[slot_v];
                    let in_slot = slot_v - snap.offsets[v];
                    pair[pair_off[v] + tri_index(in_slot, out_slot, d)] += st.sigma[u] * coeff;
                }
            }
        }
    }
}

fn add_into(acc: &mut Accumulated, part: &Accumulated) {
    acc.vertex
        .iter_mut()
        .zip(&part.vertex)
        .for_each(|(a, b)| *a += b);
    acc.edge
        .iter_mut()
        .zip(&part.edge)
        .for_each(|(a, b)| *a += b);
    if let (Some(a), Some(b)) = (acc.pair.as_mut(), part.pair.as_ref()) {
        a.iter_mut().zip(b).for_each(|(a, b)| *a += b);
    }
}

/// Ordered-pair dependency sums from every source.
pub(crate) fn accumulate(snap: &Snapshot, mode: DistanceMode, with_pairs: bool) -> Accumulated {
    let n = snap.len();
    let pair_off = pair_offsets(snap);
    let zero = || Accumulated {
        vertex: vec![0.0; n],
        edge: vec![0.0; snap.edges.len()],
        pair: with_pairs.then(|| vec![0.0; pair_off[n]]),
    };

    let blocks: Vec<(usize, usize)> = (0..n)
        .step_by(SOURCES_PER_BLOCK)
        .map(|b| (b, (b + SOURCES_PER_BLOCK).min(n)))
        .collect();
    let mut total = zero();
    for wave in blocks.chunks(BLOCKS_PER_WAVE) {
        let partials: Vec<Accumulated> = wave
            .par_iter()
            .map(|&(lo, hi)| {
                let mut part = zero();
                let mut st = Sssp::new(n);
                for s in lo..hi {
                    accumulate_source(snap, mode, s, &mut st, &mut part, &pair_off);
                }
                part
            })
            .collect();
        for p in &partials {
            add_into(&mut total, p);
        }
    }
    total
}
