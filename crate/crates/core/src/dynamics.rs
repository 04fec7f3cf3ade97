//! Per-interval weight update: reinforce pairs that exchanged messages,
//! decay silent edges, and cut edges that stayed silent too long.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DatasetId, EdgeKey, InteractionGraph, NodeId};
use crate::ingest::MessageEvent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPolicy {
    /// Multiplier applied to a silent edge's weight, in (0, 1).
    pub decay_factor: f64,
    /// Consecutive silent intervals after which an edge is removed.
    pub cut_after_idle: u32,
}

impl Default for DecayPolicy {
    fn default() -> Self {
        DecayPolicy {
            decay_factor: 0.5,
            cut_after_idle: 2,
        }
    }
}

impl DecayPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.decay_factor > 0.0 && self.decay_factor < 1.0) {
            return Err(Error::Config(format!(
                "decay factor must lie in (0, 1), got {}",
                self.decay_factor
            )));
        }
        if self.cut_after_idle == 0 {
            return Err(Error::Config("cut_after_idle must be at least 1".into()));
        }
        Ok(())
    }
}

/// What one interval did to the edge set, as dataset-id pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IntervalReport {
    pub messages: usize,
    pub created: Vec<(DatasetId, DatasetId)>,
    pub reinforced: Vec<(DatasetId, DatasetId)>,
    pub decayed: Vec<(DatasetId, DatasetId)>,
    pub cut: Vec<(DatasetId, DatasetId)>,
}

fn origin_pair(g: &InteractionGraph, key: EdgeKey) -> (DatasetId, DatasetId) {
    let a = g.origin(key.lo()).unwrap();
    let b = g.origin(key.hi()).unwrap();
    (a.min(b), a.max(b))
}

/// Applies one interval's events to `graph`.
///
/// Traffic is aggregated per unordered dataset-id pair; each pair's sizes
/// are summed in sorted order so the result does not depend on event order.
/// A pair with traffic reinforces its existing edge (between whichever
/// copies hold it) or creates one between the primary copies. Every other
/// edge decays and counts one more idle interval; edges reaching
/// `cut_after_idle` are removed. Unknown ids become new vertices.
pub fn apply_interval(
    graph: &mut InteractionGraph,
    events: &[MessageEvent],
    policy: &DecayPolicy,
) -> Result<IntervalReport> {
    policy.validate()?;
    let mut traffic: BTreeMap<(DatasetId, DatasetId), Vec<f64>> = BTreeMap::new();
    for e in events {
        if e.sender == e.receiver {
            continue;
        }
        let key = (e.sender.min(e.receiver), e.sender.max(e.receiver));
        traffic.entry(key).or_default().push(e.size);
    }

    let mut report = IntervalReport {
        messages: events.len(),
        ..Default::default()
    };
    let mut touched: BTreeSet<EdgeKey> = BTreeSet::new();
    for ((a, b), mut sizes) in traffic {
        sizes.sort_by(f64::total_cmp);
        let amount: f64 = sizes.iter().sum();
        let key = match graph.edge_between_origins(a, b) {
            Some(key) => {
                report.reinforced.push((a, b));
                key
            }
            None => {
                let u = graph.ensure_origin(a);
                let v = graph.ensure_origin(b);
                report.created.push((a, b));
                EdgeKey::new(u, v)
            }
        };
        graph.add_message_weight(key.lo(), key.hi(), amount)?;
        touched.insert(key);
    }

    let silent: Vec<EdgeKey> = graph
        .edges()
        .map(|(k, _)| k)
        .filter(|k| !touched.contains(k))
        .collect();
    for key in silent {
        let pair = origin_pair(graph, key);
        let state = graph.edge_mut(key).expect("silent edge exists");
        state.weight *= policy.decay_factor;
        state.idle_intervals += 1;
        if state.idle_intervals >= policy.cut_after_idle
            || state.weight.is_nan()
            || state.weight <= 0.0
        {
            graph.remove_edge(key.lo(), key.hi());
            report.cut.push(pair);
        } else {
            report.decayed.push(pair);
        }
    }
    Ok(report)
}

/// Current message rate between two vertices: the maintained edge weight,
/// or 0 when they are not adjacent.
pub fn rate(graph: &InteractionGraph, a: NodeId, b: NodeId) -> f64 {
    graph.weight(a, b)
}
