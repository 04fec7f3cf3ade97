//! The detection loop and the Girvan–Newman baseline.
//!
//! Per phase: apply the phase's messages to the graph, then repeatedly
//! either remove the edge with the highest cut score or split the vertex
//! with the highest split betweenness, until no edges remain. After every
//! action the connected components are scored by modularity; the best
//! snapshot of each phase carries over into the next one, and the best
//! snapshot overall is the result.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centrality::{analyze, betweenness, DistanceMode};
use crate::dynamics::{apply_interval, DecayPolicy, IntervalReport};
use crate::error::{Error, Result};
use crate::graph::{DatasetId, EdgeKey, InteractionGraph, NodeId};
use crate::ingest::PhasedLog;
use crate::metrics::{modularity, ModularityWeighting};
use crate::partition::Partition;
use crate::scoring::{argmax, score_candidates, ScoringConfig, SCORE_TIE_TOLERANCE};

/// Scale on which the best edge and the best vertex are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Split betweenness of the best vertex against the edge betweenness
    /// of the best-cut edge.
    Betweenness,
    /// Normalized cut against normalized split. Both family maxima are 1
    /// after min–max normalization, so this always ties.
    Normalized,
}

impl FromStr for Comparison {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "betweenness" => Ok(Comparison::Betweenness),
            "normalized" => Ok(Comparison::Normalized),
            other => Err(Error::Config(format!(
                "unknown comparison {other:?} (expected betweenness or normalized)"
            ))),
        }
    }
}

/// Which action wins when the compared values are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    Split,
    Cut,
}

impl FromStr for TieRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(TieRule::Split),
            "cut" => Ok(TieRule::Cut),
            other => Err(Error::Config(format!(
                "unknown tie rule {other:?} (expected split or cut)"
            ))),
        }
    }
}

/// Graph against which each candidate partition's modularity is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModularityReference {
    /// The graph as it stood when the current phase's detection began.
    PhaseStart,
    /// The current, pruned graph.
    Pruned,
}

impl FromStr for ModularityReference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase-start" => Ok(ModularityReference::PhaseStart),
            "pruned" => Ok(ModularityReference::Pruned),
            other => Err(Error::Config(format!(
                "unknown modularity reference {other:?} (expected phase-start or pruned)"
            ))),
        }
    }
}

impl fmt::Display for ModularityReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularityReference::PhaseStart => "phase-start",
            ModularityReference::Pruned => "pruned",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub scoring: ScoringConfig,
    pub policy: DecayPolicy,
    pub n_phases: usize,
    pub distance: DistanceMode,
    pub max_iterations: usize,
    pub allow_splitting: bool,
    pub comparison: Comparison,
    pub tie_rule: TieRule,
    pub modularity_reference: ModularityReference,
    pub modularity_weighting: ModularityWeighting,
    /// Unused by the deterministic default path; echoed in reports.
    pub seed: Option<u64>,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            scoring: ScoringConfig::default(),
            policy: DecayPolicy::default(),
            n_phases: 6,
            distance: DistanceMode::InverseWeight,
            max_iterations: 100_000,
            allow_splitting: true,
            comparison: Comparison::Betweenness,
            tie_rule: TieRule::Split,
            modularity_reference: ModularityReference::PhaseStart,
            modularity_weighting: ModularityWeighting::Unweighted,
            seed: None,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        self.scoring.validate()?;
        self.policy.validate()?;
        if self.n_phases == 0 {
            return Err(Error::Config("n_phases must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Action {
    RemoveEdge {
        edge: EdgeKey,
        origins: (DatasetId, DatasetId),
    },
    SplitVertex {
        node: NodeId,
        origin: DatasetId,
        into: (NodeId, NodeId),
    },
}

impl Action {
    pub fn is_split(&self) -> bool {
        matches!(self, Action::SplitVertex { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub phase: usize,
    pub action: Action,
    /// Winning normalized score.
    pub score: f64,
    /// The winner's raw cut (edges) or split betweenness (vertices).
    pub raw_score: f64,
    pub modularity: f64,
    pub nodes: usize,
    pub edges: usize,
    pub communities: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DetectionTrace {
    pub records: Vec<IterationRecord>,
    /// Index of the first maximum of the modularity sequence.
    pub best_iteration: Option<usize>,
    /// True when `max_iterations` stopped the run before the graph emptied.
    pub exhausted: bool,
    pub intervals: Vec<IntervalReport>,
}

impl DetectionTrace {
    pub fn best_modularity(&self) -> Option<f64> {
        self.best_iteration.map(|i| self.records[i].modularity)
    }

    pub fn actions(&self) -> impl Iterator<Item = &Action> {
        self.records.iter().map(|r| &r.action)
    }
}

#[derive(Debug, Clone)]
pub struct DetectionOutcome {
    pub partition: Partition,
    pub trace: DetectionTrace,
    /// Graph at the best iteration.
    pub graph: InteractionGraph,
    /// Graph after the first phase's weight update, before any action.
    pub initial: InteractionGraph,
    /// Graph right after the requested iteration, if one was requested.
    pub captured: Option<InteractionGraph>,
}

/// Runs detection, optionally capturing the graph after one iteration.
#[derive(Debug, Clone)]
pub struct Detector {
    config: DetectorConfig,
    capture: Option<usize>,
}

struct Best {
    modularity: f64,
    iteration: usize,
    partition: Partition,
    graph: InteractionGraph,
}

impl Detector {
    pub fn new(config: DetectorConfig) -> Self {
        Detector {
            config,
            capture: None,
        }
    }

    pub fn capture_iteration(mut self, iteration: usize) -> Self {
        self.capture = Some(iteration);
        self
    }

    /// Full run over a phased message log.
    pub fn run(&self, log: &PhasedLog) -> Result<DetectionOutcome> {
        self.config.validate()?;
        if log.is_empty() {
            return Err(Error::EmptyLog);
        }
        let mut graph = InteractionGraph::new();
        let mut ids: Vec<DatasetId> = log.events().flat_map(|e| [e.sender, e.receiver]).collect();
        ids.sort_unstable();
        ids.dedup();
        for id in ids {
            graph.add_node(id);
        }

        let mut state = RunState::default();
        let mut initial = None;
        for (phase, events) in log.phases.iter().enumerate() {
            let report = apply_interval(&mut graph, events, &self.config.policy)?;
            state.trace.intervals.push(report);
            if initial.is_none() {
                initial = Some(graph.clone());
            }
            graph = self.detect_phase(graph, phase, &mut state)?;
        }
        Ok(state.finish(graph, initial.unwrap_or_default()))
    }

    /// Detection on a fixed graph: one phase, no weight dynamics.
    pub fn run_graph(&self, graph: InteractionGraph) -> Result<DetectionOutcome> {
        self.config.validate()?;
        let mut state = RunState::default();
        let initial = graph.clone();
        let graph = self.detect_phase(graph, 0, &mut state)?;
        Ok(state.finish(graph, initial))
    }

    fn modularity_of(
        &self,
        reference: &InteractionGraph,
        current: &InteractionGraph,
        partition: &Partition,
    ) -> Result<f64> {
        let on = match self.config.modularity_reference {
            ModularityReference::PhaseStart => reference,
            ModularityReference::Pruned => current,
        };
        match modularity(on, partition, self.config.modularity_weighting) {
            Err(Error::NoEdges) => Ok(0.0),
            other => other,
        }
    }

    fn prefers_split(&self, split_value: f64, cut_value: f64) -> bool {
        let tol = SCORE_TIE_TOLERANCE * split_value.abs().max(cut_value.abs()).max(1.0);
        if (split_value - cut_value).abs() <= tol {
            self.config.tie_rule == TieRule::Split
        } else {
            split_value > cut_value
        }
    }

    /// Runs one phase to an edgeless graph and returns that phase's best
    /// snapshot (or the graph unchanged if nothing happened).
    fn detect_phase(
        &self,
        mut graph: InteractionGraph,
        phase: usize,
        state: &mut RunState,
    ) -> Result<InteractionGraph> {
        let cfg = &self.config;
        let reference = graph.clone();
        let mut phase_best: Option<(f64, InteractionGraph)> = None;

        while graph.edge_count() > 0 {
            if state.trace.records.len() >= cfg.max_iterations {
                state.trace.exhausted = true;
                break;
            }
            let (bet, splits) = analyze(&graph, cfg.distance, cfg.allow_splitting)?;
            let scored = score_candidates(&graph, &bet, splits.as_ref(), &cfg.scoring);
            let (edge, edge_norm) = scored.best_edge().expect("graph has edges");

            let split_choice = scored.best_vertex().filter(|&(v, v_norm)| {
                let raw = scored.raw_split[&v];
                raw > 0.0
                    && match cfg.comparison {
                        Comparison::Betweenness => self.prefers_split(raw, bet.edge[&edge]),
                        Comparison::Normalized => self.prefers_split(v_norm, edge_norm),
                    }
            });

            let (action, score, raw_score) = match split_choice {
                Some((v, v_norm)) => {
                    let cand = &splits.as_ref().expect("splits computed").best_split[&v];
                    let origin = graph.origin(v).expect("live vertex");
                    let into = graph.split_vertex(v, &cand.side_a, &cand.side_b)?;
                    (
                        Action::SplitVertex {
                            node: v,
                            origin,
                            into,
                        },
                        v_norm,
                        cand.score,
                    )
                }
                None => {
                    let origins = (
                        graph.origin(edge.lo()).expect("live vertex"),
                        graph.origin(edge.hi()).expect("live vertex"),
                    );
                    graph.remove_edge(edge.lo(), edge.hi());
                    (
                        Action::RemoveEdge { edge, origins },
                        edge_norm,
                        scored.raw_cut[&edge],
                    )
                }
            };

            let partition = graph.connected_components();
            let q = self.modularity_of(&reference, &graph, &partition)?;
            let iteration = state.trace.records.len();
            log::debug!("phase {phase} iteration {iteration}: {action:?} Q={q:.6}");
            state.trace.records.push(IterationRecord {
                iteration,
                phase,
                action,
                score,
                raw_score,
                modularity: q,
                nodes: graph.node_count(),
                edges: graph.edge_count(),
                communities: partition.len(),
            });
            if self.capture == Some(iteration) {
                state.captured = Some(graph.clone());
            }
            if phase_best.as_ref().is_none_or(|(b, _)| q > *b) {
                phase_best = Some((q, graph.clone()));
            }
            if state.best.as_ref().is_none_or(|b| q > b.modularity) {
                state.best = Some(Best {
                    modularity: q,
                    iteration,
                    partition,
                    graph: graph.clone(),
                });
            }
        }
        Ok(phase_best.map_or(graph, |(_, g)| g))
    }
}

#[derive(Default)]
struct RunState {
    trace: DetectionTrace,
    best: Option<Best>,
    captured: Option<InteractionGraph>,
}

impl RunState {
    fn finish(mut self, last: InteractionGraph, initial: InteractionGraph) -> DetectionOutcome {
        let (partition, graph) = match self.best {
            Some(b) => {
                self.trace.best_iteration = Some(b.iteration);
                (b.partition, b.graph)
            }
            None => (last.connected_components(), last),
        };
        DetectionOutcome {
            partition,
            trace: self.trace,
            graph,
            initial,
            captured: self.captured,
        }
    }
}

pub fn detect(log: &PhasedLog, config: &DetectorConfig) -> Result<DetectionOutcome> {
    Detector::new(config.clone()).run(log)
}

/// Girvan–Newman: repeatedly remove the edge of highest (unit-length)
/// betweenness, scoring each component partition by modularity against
/// the input graph, and return the best one.
pub fn girvan_newman(
    graph: &InteractionGraph,
    max_iterations: usize,
) -> Result<(Partition, DetectionTrace)> {
    let mut g = graph.clone();
    let mut trace = DetectionTrace::default();
    let mut best: Option<(f64, Partition)> = None;
    while g.edge_count() > 0 {
        if trace.records.len() >= max_iterations {
            trace.exhausted = true;
            break;
        }
        let bet = betweenness(&g, DistanceMode::Unit)?;
        let (edge, raw) = argmax(&bet.edge).expect("graph has edges");
        let origins = (g.origin(edge.lo()).unwrap(), g.origin(edge.hi()).unwrap());
        g.remove_edge(edge.lo(), edge.hi());
        let partition = g.connected_components();
        let q = modularity(graph, &partition, ModularityWeighting::Unweighted)?;
        let iteration = trace.records.len();
        trace.records.push(IterationRecord {
            iteration,
            phase: 0,
            action: Action::RemoveEdge { edge, origins },
            score: 1.0,
            raw_score: raw,
            modularity: q,
            nodes: g.node_count(),
            edges: g.edge_count(),
            communities: partition.len(),
        });
        if best.as_ref().is_none_or(|(b, _)| q > *b) {
            best = Some((q, partition));
            trace.best_iteration = Some(iteration);
        }
    }
    let partition = match best {
        Some((_, p)) => p,
        None => g.connected_components(),
    };
    Ok((partition, trace))
}
