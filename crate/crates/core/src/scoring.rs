//! Edge cut scores, vertex split scores, and their normalization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centrality::{BetweennessScores, SplitScores};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, InteractionGraph, NodeId};

/// Relative importance of betweenness, message rate and similarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaWeights {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl Default for AlphaWeights {
    fn default() -> Self {
        AlphaWeights {
            alpha1: 0.65,
            alpha2: 0.83,
            alpha3: 0.43,
        }
    }
}

impl AlphaWeights {
    pub fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("alpha3", self.alpha3),
        ] {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {a}")));
            }
        }
        Ok(())
    }
}

/// How betweenness, rate and similarity combine into a cut score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutFormula {
    /// `α1·cb / (max(α2·rm, ε) · max(α3·sim, ε))`.
    Literal,
    /// `cb^α1 / (max(rm, ε)^α2 · max(sim, ε)^α3)`.
    Exponent,
    /// Raw edge betweenness; rate and similarity ignored.
    Betweenness,
}

impl FromStr for CutFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(CutFormula::Literal),
            "exponent" => Ok(CutFormula::Exponent),
            "betweenness" => Ok(CutFormula::Betweenness),
            other => Err(Error::Config(format!(
                "unknown cut formula {other:?} (expected literal, exponent or betweenness)"
            ))),
        }
    }
}

impl fmt::Display for CutFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutFormula::Literal => "literal",
            CutFormula::Exponent => "exponent",
            CutFormula::Betweenness => "betweenness",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityMeasure {
    /// Jaccard coefficient of neighbor sets, endpoints excluded.
    Jaccard,
    /// Cosine of incident-weight vectors, endpoints excluded.
    WeightedCosine,
}

impl FromStr for SimilarityMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jaccard" => Ok(SimilarityMeasure::Jaccard),
            "weighted-cosine" => Ok(SimilarityMeasure::WeightedCosine),
            other => Err(Error::Config(format!(
                "unknown similarity {other:?} (expected jaccard or weighted-cosine)"
            ))),
        }
    }
}

pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    pub alphas: AlphaWeights,
    pub formula: CutFormula,
    pub similarity: SimilarityMeasure,
    pub epsilon: f64,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            alphas: AlphaWeights::default(),
            formula: CutFormula::Literal,
            similarity: SimilarityMeasure::Jaccard,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl ScoringConfig {
    pub fn validate(&self) -> Result<()> {
        self.alphas.validate()?;
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

fn others(graph: &InteractionGraph, v: NodeId, s: NodeId, t: NodeId) -> BTreeSet<NodeId> {
    graph.neighbors(v).filter(|&n| n != s && n != t).collect()
}

/// Jaccard similarity of `N(s)` and `N(t)`, both without `s` and `t`.
/// Zero when the union is empty.
pub fn similarity(graph: &InteractionGraph, s: NodeId, t: NodeId) -> f64 {
    let a = others(graph, s, s, t);
    let b = others(graph, t, s, t);
    let union = a.union(&b).count();
    if union == 0 {
        0.0
    } else {
        a.intersection(&b).count() as f64 / union as f64
    }
}

pub fn weighted_cosine_similarity(graph: &InteractionGraph, s: NodeId, t: NodeId) -> f64 {
    let a = others(graph, s, s, t);
    let b = others(graph, t, s, t);
    let dot: f64 = a
        .intersection(&b)
        .map(|&n| graph.weight(s, n) * graph.weight(t, n))
        .sum();
    let norm = |v: NodeId, ns: &BTreeSet<NodeId>| {
        ns.iter()
            .map(|&n| graph.weight(v, n).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let denom = norm(s, &a) * norm(t, &b);
    if denom > 0.0 {
        dot / denom
    } else {
        0.0
    }
}

/// `α1·cb / (max(α2·rm, ε) · max(α3·sim, ε))`.
pub fn cut_score(cb: f64, rm: f64, sim: f64, alphas: &AlphaWeights, epsilon: f64) -> f64 {
    alphas.alpha1 * cb / ((alphas.alpha2 * rm).max(epsilon) * (alphas.alpha3 * sim).max(epsilon))
}

/// `cb^α1 / (max(rm, ε)^α2 · max(sim, ε)^α3)`.
pub fn cut_score_exponent(cb: f64, rm: f64, sim: f64, alphas: &AlphaWeights, epsilon: f64) -> f64 {
    cb.powf(alphas.alpha1)
        / (rm.max(epsilon).powf(alphas.alpha2) * sim.max(epsilon).powf(alphas.alpha3))
}

/// Min–max normalization to [0, 1]. A family whose values are all equal
/// (including a single element) maps to 1.
pub fn normalize<K: Ord + Clone>(raw: &BTreeMap<K, f64>) -> BTreeMap<K, f64> {
    let (lo, hi) = raw
        .values()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let range = hi - lo;
    raw.iter()
        .map(|(k, &x)| {
            let y = if range > 0.0 { (x - lo) / range } else { 1.0 };
            (k.clone(), y)
        })
        .collect()
}

/// Relative slack under which two scores are treated as tied.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-9;

/// Key with the largest value; among values within tolerance of the
/// maximum, the smallest key wins.
pub fn argmax<K: Ord + Copy>(scores: &BTreeMap<K, f64>) -> Option<(K, f64)> {
    let max = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = max - SCORE_TIE_TOLERANCE * max.abs().max(1.0);
    scores
        .iter()
        .find(|(_, &v)| v >= floor)
        .map(|(k, &v)| (*k, v))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoredCandidates {
    pub raw_cut: BTreeMap<EdgeKey, f64>,
    pub raw_split: BTreeMap<NodeId, f64>,
    pub edge_cut: BTreeMap<EdgeKey, f64>,
    pub vertex_split: BTreeMap<NodeId, f64>,
}

impl ScoredCandidates {
    pub fn best_edge(&self) -> Option<(EdgeKey, f64)> {
        argmax(&self.edge_cut)
    }

    pub fn best_vertex(&self) -> Option<(NodeId, f64)> {
        argmax(&self.vertex_split)
    }
}

/// Raw cut per edge and raw split per vertex, each family normalized
/// independently.
pub fn score_candidates(
    graph: &InteractionGraph,
    bet: &BetweennessScores,
    splits: Option<&SplitScores>,
    cfg: &ScoringConfig,
) -> ScoredCandidates {
    let raw_cut: BTreeMap<EdgeKey, f64> = graph
        .edges()
        .map(|(key, state)| {
            let cb = bet.edge.get(&key).copied().unwrap_or(0.0);
            let (s, t) = (key.lo(), key.hi());
            let score = match cfg.formula {
                CutFormula::Betweenness => cb,
                formula => {
                    let sim = match cfg.similarity {
                        SimilarityMeasure::Jaccard => similarity(graph, s, t),
                        SimilarityMeasure::WeightedCosine => {
                            weighted_cosine_similarity(graph, s, t)
                        }
                    };
                    if formula == CutFormula::Literal {
                        cut_score(cb, state.weight, sim, &cfg.alphas, cfg.epsilon)
                    } else {
                        cut_score_exponent(cb, state.weight, sim, &cfg.alphas, cfg.epsilon)
                    }
                }
            };
            (key, score)
        })
        .collect();
    let raw_split: BTreeMap<NodeId, f64> = splits
        .map(|s| s.best_split.iter().map(|(v, c)| (*v, c.score)).collect())
        .unwrap_or_default();
    ScoredCandidates {
        edge_cut: normalize(&raw_cut),
        vertex_split: normalize(&raw_split),
        raw_cut,
        raw_split,
    }
}
