use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{DatasetId, InteractionGraph};

/// Communities over dataset ids. A dataset id may belong to several
/// communities when one of its split copies ended up in each.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    communities: Vec<BTreeSet<DatasetId>>,
}

impl Partition {
    /// Drops empty and duplicate communities and orders the rest by
    /// smallest member.
    pub fn new(mut communities: Vec<BTreeSet<DatasetId>>) -> Self {
        communities.retain(|c| !c.is_empty());
        communities.sort();
        communities.dedup();
        Partition { communities }
    }

    pub fn from_labels<L: Ord>(labels: impl IntoIterator<Item = (DatasetId, L)>) -> Self {
        let mut groups: BTreeMap<L, BTreeSet<DatasetId>> = BTreeMap::new();
        for (id, l) in labels {
            groups.entry(l).or_default().insert(id);
        }
        Self::new(groups.into_values().collect())
    }

    pub fn communities(&self) -> &[BTreeSet<DatasetId>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn members(&self) -> BTreeSet<DatasetId> {
        self.communities.iter().flatten().copied().collect()
    }

    /// Community indices per dataset id.
    pub fn memberships(&self) -> BTreeMap<DatasetId, Vec<usize>> {
        let mut out: BTreeMap<DatasetId, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.communities.iter().enumerate() {
            for &id in c {
                out.entry(id).or_default().push(i);
            }
        }
        out
    }

    pub fn overlapping(&self) -> BTreeSet<DatasetId> {
        self.memberships()
            .into_iter()
            .filter(|(_, m)| m.len() > 1)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn is_overlapping(&self) -> bool {
        !self.overlapping().is_empty()
    }

    /// Resolves overlap: each multi-membership id keeps only the community
    /// in which its incident edge weight (to other members, measured in
    /// `graph`) is largest. Ties go to the lowest community index.
    pub fn harden(&self, graph: &InteractionGraph) -> Partition {
        let memberships = self.memberships();
        let mut communities = self.communities.clone();
        for (id, comms) in memberships.iter().filter(|(_, m)| m.len() > 1) {
            let mut best = comms[0];
            let mut best_weight = f64::NEG_INFINITY;
            for &c in comms {
                let w: f64 = graph
                    .copies_of(*id)
                    .flat_map(|v| graph.neighbors(v).map(move |n| (v, n)))
                    .filter(|&(_, n)| {
                        graph
                            .origin(n)
                            .is_some_and(|o| o != *id && self.communities[c].contains(&o))
                    })
                    .map(|(v, n)| graph.weight(v, n))
                    .sum();
                if w > best_weight {
                    best_weight = w;
                    best = c;
                }
            }
            for &c in comms {
                if c != best {
                    communities[c].remove(id);
                }
            }
        }
        Partition::new(communities)
    }

    /// Dataset id → community index. Only meaningful for hard partitions;
    /// overlapping ids map to their first community.
    pub fn labels(&self) -> BTreeMap<DatasetId, usize> {
        self.memberships()
            .into_iter()
            .map(|(id, m)| (id, m[0]))
            .collect()
    }
}
