//! Modularity and normalized mutual information.
//!
//! Both are defined for hard partitions over dataset ids. Overlapping
//! partitions are hardened first with [`Partition::harden`]: each shared id
//! keeps the community holding most of its incident edge weight.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DatasetId, InteractionGraph};
use crate::ingest::GroundTruth;
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularityWeighting {
    /// Edges and degrees are counted.
    #[default]
    Unweighted,
    /// Edge weights and weighted degrees.
    Weighted,
}

impl FromStr for ModularityWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unweighted" => Ok(ModularityWeighting::Unweighted),
            "weighted" => Ok(ModularityWeighting::Weighted),
            other => Err(Error::Config(format!(
                "unknown modularity weighting {other:?} (expected unweighted or weighted)"
            ))),
        }
    }
}

impl fmt::Display for ModularityWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularityWeighting::Unweighted => "unweighted",
            ModularityWeighting::Weighted => "weighted",
        })
    }
}

/// Modularity `Σ_c [l_c/m − (d_c/2m)²]` of `partition` on `graph`, where
/// `l_c` counts edges with both endpoints in `c`, `d_c` sums the degrees of
/// `c`, and `m` is the edge total. Vertices are identified by origin, so
/// split copies count as one user; overlap is hardened first. Ids missing
/// from the partition are treated as singletons.
pub fn modularity(
    graph: &InteractionGraph,
    partition: &Partition,
    weighting: ModularityWeighting,
) -> Result<f64> {
    let hard = if partition.is_overlapping() {
        partition.harden(graph)
    } else {
        partition.clone()
    };
    let labels = hard.labels();
    let community = |o: DatasetId| {
        labels
            .get(&o)
            .map_or(Community::Alone(o), |&c| Community::In(c))
    };

    let mut m = 0.0;
    let mut internal: BTreeMap<Community, f64> = BTreeMap::new();
    let mut degree: BTreeMap<Community, f64> = BTreeMap::new();
    for (key, state) in graph.edges() {
        let w = match weighting {
            ModularityWeighting::Unweighted => 1.0,
            ModularityWeighting::Weighted => state.weight,
        };
        let a = community(graph.origin(key.lo()).unwrap());
        let b = community(graph.origin(key.hi()).unwrap());
        m += w;
        *degree.entry(a).or_default() += w;
        *degree.entry(b).or_default() += w;
        if a == b {
            *internal.entry(a).or_default() += w;
        }
    }
    if m.is_nan() || m <= 0.0 {
        return Err(Error::NoEdges);
    }
    Ok(degree
        .iter()
        .map(|(c, d)| {
            let l = internal.get(c).copied().unwrap_or(0.0);
            l / m - (d / (2.0 * m)).powi(2)
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Community {
    In(usize),
    Alone(DatasetId),
}

/// Counts of ids shared by row community `i` and column community `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub total: usize,
}

impl ConfusionMatrix {
    /// Built over ids present in both partitions. Both must be hard.
    pub fn new(rows: &Partition, cols: &Partition) -> Result<Self> {
        for p in [rows, cols] {
            if let Some(&id) = p.overlapping().iter().next() {
                return Err(Error::OverlappingPartition(id));
            }
        }
        let row_of = rows.labels();
        let col_of = cols.labels();
        let common: BTreeSet<DatasetId> = row_of
            .keys()
            .filter(|id| col_of.contains_key(id))
            .copied()
            .collect();
        if common.is_empty() {
            return Err(Error::NoCommonNodes);
        }
        let mut counts = vec![vec![0; cols.len()]; rows.len()];
        for id in &common {
            counts[row_of[id]][col_of[id]] += 1;
        }
        // drop communities with no shared ids
        counts.retain(|r| r.iter().any(|&c| c > 0));
        let keep: Vec<usize> = (0..cols.len())
            .filter(|&j| counts.iter().any(|r| r[j] > 0))
            .collect();
        let counts: Vec<Vec<usize>> = counts
            .into_iter()
            .map(|r| keep.iter().map(|&j| r[j]).collect())
            .collect();
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..keep.len())
            .map(|j| counts.iter().map(|r| r[j]).sum())
            .collect();
        Ok(ConfusionMatrix {
            counts,
            row_sums,
            col_sums,
            total: common.len(),
        })
    }

    /// Danon et al.'s normalized mutual information, natural log.
    /// Two one-block partitions score 1.
    pub fn nmi(&self) -> f64 {
        let n = self.total as f64;
        let mut numerator = 0.0;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &nij) in row.iter().enumerate() {
                if nij > 0 {
                    let nij = nij as f64;
                    numerator +=
                        nij * (nij * n / (self.row_sums[i] as f64 * self.col_sums[j] as f64)).ln();
                }
            }
        }
        numerator *= -2.0;
        let entropy_term = |sums: &[usize]| -> f64 {
            sums.iter()
                .filter(|&&s| s > 0)
                .map(|&s| s as f64 * (s as f64 / n).ln())
                .sum()
        };
        let denominator = entropy_term(&self.row_sums) + entropy_term(&self.col_sums);
        if denominator == 0.0 {
            return 1.0;
        }
        (numerator / denominator).clamp(0.0, 1.0)
    }
}

/// NMI between two hard partitions over their shared ids.
pub fn nmi_partitions(a: &Partition, b: &Partition) -> Result<f64> {
    Ok(ConfusionMatrix::new(a, b)?.nmi())
}

/// NMI of a found partition against reference labels.
pub fn nmi(found: &Partition, truth: &GroundTruth) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::NoCommonNodes);
    }
    nmi_partitions(&truth.to_partition(), found)
}
