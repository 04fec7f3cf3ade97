//! Run, evaluate and export community detection over message logs.
//!
//! Each command writes JSON reports into an output directory. Every report
//! embeds the effective [`RunConfig`], so `evaluate` and `export` can pick
//! up where `detect` left off.

pub mod gexf;
pub mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dyncomm_core::ingest::{parse_ground_truth, parse_message_log, partition_phases};
use dyncomm_core::metrics::nmi_partitions;
use dyncomm_core::{
    girvan_newman, modularity, Action, DetectionTrace, Detector, DetectorConfig, InteractionGraph,
    MessageEvent, NodeId, Partition, Weighting,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const COMMUNITIES_FILE: &str = "communities.json";
pub const TRACE_FILE: &str = "trace.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const EVALUATION_FILE: &str = "evaluation.json";

/// Best modularity published for the EIES network.
pub const EIES_REFERENCE_MODULARITY: f64 = 0.8947311;
const REFERENCE_NOTE: &str = "Published EIES value, recorded for comparison only. It is not \
expected to be reproduced: the similarity measure, decay law, score normalization and alpha \
semantics behind it are not fully specified, and the alphas were tuned by hand.";
const HARDENING_RULE: &str = "a node in several communities is kept only in the one holding the \
largest share of its incident edge weight; ties go to the lowest community index";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dyncomm_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for bad usage or unreadable input, 1 for failures during computation.
    pub fn exit_code(&self) -> i32 {
        use dyncomm_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Json { .. } => 2,
            CliError::Core(
                E::Parse { .. }
                | E::Io { .. }
                | E::Config(_)
                | E::EmptyLog
                | E::DuplicateId { .. }
                | E::NonPositiveAmount(_),
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    /// Girvan–Newman on the whole log aggregated into one graph.
    Gn,
}

impl FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gn" => Ok(Baseline::Gn),
            other => Err(format!("unknown baseline {other:?} (expected gn)")),
        }
    }
}

/// Everything that determines a run's output. Output directory and worker
/// count are deliberately absent: neither changes the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub weighting: Weighting,
    pub truth: Option<PathBuf>,
    pub baseline: Option<Baseline>,
    pub detector: DetectorConfig,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            weighting: Weighting::Messages,
            truth: None,
            baseline: None,
            detector: DetectorConfig::default(),
        }
    }

    fn algorithm(&self) -> &'static str {
        match self.baseline {
            Some(Baseline::Gn) => "girvan-newman",
            None => "dynamic-split",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub nodes: usize,
    pub messages: usize,
    pub phases: usize,
    pub phase_messages: Vec<usize>,
    pub first_timestamp: i64,
    pub last_timestamp: i64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub config: RunConfig,
    pub stats: DatasetStats,
    pub partition: Partition,
    pub trace: DetectionTrace,
    pub initial: InteractionGraph,
    pub best: InteractionGraph,
    pub captured: Option<InteractionGraph>,
}

/// Whole log summed into one graph, no decay.
pub fn cumulative_graph(events: &[MessageEvent]) -> Result<InteractionGraph> {
    let mut totals: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for e in events {
        let key = (e.sender.min(e.receiver), e.sender.max(e.receiver));
        *totals.entry(key).or_default() += e.size;
    }
    Ok(InteractionGraph::from_weighted_edges(
        totals.into_iter().map(|((a, b), w)| (a, b, w)),
    )?)
}

/// Replays the first `count` removals of an edge-only trace.
fn replay_removals(
    graph: &InteractionGraph,
    trace: &DetectionTrace,
    count: usize,
) -> InteractionGraph {
    let mut g = graph.clone();
    for action in trace.actions().take(count) {
        if let Action::RemoveEdge { edge, .. } = action {
            g.remove_edge(edge.lo(), edge.hi());
        }
    }
    g
}

/// Runs detection (or the baseline) without writing anything.
pub fn run(config: &RunConfig, capture: Option<usize>) -> Result<RunResult> {
    config.detector.validate()?;
    let events = parse_message_log(&config.input, config.weighting)?;
    let log = partition_phases(&events, config.detector.n_phases)?;
    let stats = DatasetStats {
        nodes: dyncomm_core::ingest::distinct_nodes(&events).len(),
        messages: events.len(),
        phases: log.phases.len(),
        phase_messages: log.phases.iter().map(Vec::len).collect(),
        first_timestamp: events.first().map_or(0, |e| e.timestamp),
        last_timestamp: events.last().map_or(0, |e| e.timestamp),
    };

    match config.baseline {
        Some(Baseline::Gn) => {
            let g = cumulative_graph(&events)?;
            let (partition, trace) = girvan_newman(&g, config.detector.max_iterations)?;
            let best = trace
                .best_iteration
                .map_or_else(|| g.clone(), |b| replay_removals(&g, &trace, b + 1));
            let captured = capture
                .filter(|&k| k < trace.records.len())
                .map(|k| replay_removals(&g, &trace, k + 1));
            Ok(RunResult {
                config: config.clone(),
                stats,
                partition,
                trace,
                initial: g,
                best,
                captured,
            })
        }
        None => {
            let mut detector = Detector::new(config.detector.clone());
            if let Some(k) = capture {
                detector = detector.capture_iteration(k);
            }
            let out = detector.run(&log)?;
            Ok(RunResult {
                config: config.clone(),
                stats,
                partition: out.partition,
                trace: out.trace,
                initial: out.initial,
                best: out.graph,
                captured: out.captured,
            })
        }
    }
}

fn communities_json(result: &RunResult) -> Value {
    let communities: Vec<Value> = result
        .partition
        .communities()
        .iter()
        .enumerate()
        .map(|(i, c)| json!({"id": i, "size": c.len(), "members": c}))
        .collect();
    let overlapping: Vec<Value> = result
        .partition
        .memberships()
        .into_iter()
        .filter(|(_, m)| m.len() > 1)
        .map(|(id, m)| json!({"node": id, "communities": m}))
        .collect();
    json!({
        "algorithm": result.config.algorithm(),
        "config": result.config,
        "modularity": result.trace.best_modularity(),
        "communities": communities,
        "overlapping": overlapping,
    })
}

fn trace_json(result: &RunResult) -> Value {
    let intervals: Vec<Value> = result
        .trace
        .intervals
        .iter()
        .enumerate()
        .map(|(phase, r)| {
            json!({
                "phase": phase,
                "messages": r.messages,
                "created": r.created,
                "reinforced": r.reinforced,
                "decayed": r.decayed,
                "cut": r.cut,
            })
        })
        .collect();
    json!({
        "algorithm": result.config.algorithm(),
        "config": result.config,
        "best_iteration": result.trace.best_iteration,
        "exhausted": result.trace.exhausted,
        "iterations": result.trace.records,
        "intervals": intervals,
    })
}

fn summary_json(result: &RunResult) -> Value {
    let q = result.trace.best_modularity();
    let splits = result.trace.actions().filter(|a| a.is_split()).count();
    json!({
        "algorithm": result.config.algorithm(),
        "config": result.config,
        "dataset": result.stats,
        "best_modularity": q,
        "best_iteration": result.trace.best_iteration,
        "iterations": result.trace.records.len(),
        "removals": result.trace.records.len() - splits,
        "splits": splits,
        "exhausted": result.trace.exhausted,
        "communities": result.partition.len(),
        "overlapping_nodes": result.partition.overlapping().len(),
        "reference": {
            "eies_best_modularity": EIES_REFERENCE_MODULARITY,
            "achieved_modularity": q,
            "note": REFERENCE_NOTE,
        },
    })
}

/// Runs and writes `communities.json`, `trace.json` and `summary.json`.
/// Nothing is written if the run fails.
pub fn cmd_detect(config: &RunConfig, out: &Path) -> Result<RunResult> {
    let result = run(config, None)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    report::write_json(&out.join(COMMUNITIES_FILE), &communities_json(&result))?;
    report::write_json(&out.join(TRACE_FILE), &trace_json(&result))?;
    report::write_json(&out.join(SUMMARY_FILE), &summary_json(&result))?;
    Ok(result)
}

fn embedded_config(doc: &Value, path: &Path) -> Result<RunConfig> {
    serde_json::from_value(doc.get("config").cloned().unwrap_or(Value::Null)).map_err(|e| {
        CliError::Json {
            path: path.to_path_buf(),
            source: e,
        }
    })
}

fn partition_from_json(doc: &Value, path: &Path) -> Result<Partition> {
    let bad = || CliError::Usage(format!("{}: malformed communities list", path.display()));
    let list = doc
        .get("communities")
        .and_then(Value::as_array)
        .ok_or_else(bad)?;
    let mut communities = Vec::with_capacity(list.len());
    for c in list {
        let members = c.get("members").and_then(Value::as_array).ok_or_else(bad)?;
        communities.push(
            members
                .iter()
                .map(|m| m.as_u64().ok_or_else(bad))
                .collect::<Result<_>>()?,
        );
    }
    Ok(Partition::new(communities))
}

#[derive(Debug, Clone, Default)]
pub struct EvaluateOptions {
    /// Partition to evaluate; defaults to `communities.json` in the output
    /// directory.
    pub communities: Option<PathBuf>,
    /// Log to evaluate against; defaults to the input recorded with the
    /// partition.
    pub input: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    /// Used when no partition file exists: detect first.
    pub inline: Option<RunConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub modularity: f64,
    pub nmi: Option<f64>,
    pub communities: usize,
    pub overlapping_nodes: usize,
}

/// Modularity of a partition on the cumulative graph of the log, and NMI
/// against ground truth when given. Writes `evaluation.json`.
pub fn cmd_evaluate(opts: &EvaluateOptions, out: &Path) -> Result<Evaluation> {
    let path = opts
        .communities
        .clone()
        .unwrap_or_else(|| out.join(COMMUNITIES_FILE));
    let (partition, mut config) = if path.exists() {
        let doc = report::read_json(&path)?;
        (
            partition_from_json(&doc, &path)?,
            embedded_config(&doc, &path)?,
        )
    } else if let Some(cfg) = &opts.inline {
        let result = run(cfg, None)?;
        (result.partition, cfg.clone())
    } else {
        return Err(CliError::Usage(format!(
            "no partition at {} and no --input to detect one",
            path.display()
        )));
    };
    if let Some(input) = &opts.input {
        config.input = input.clone();
    }
    if opts.truth.is_some() {
        config.truth = opts.truth.clone();
    }

    let events = parse_message_log(&config.input, config.weighting)?;
    let graph = cumulative_graph(&events)?;
    let q = modularity(&graph, &partition, config.detector.modularity_weighting)?;
    let nmi = match &config.truth {
        Some(t) => {
            let truth = parse_ground_truth(t)?;
            Some(nmi_partitions(
                &truth.to_partition(),
                &partition.harden(&graph),
            )?)
        }
        None => None,
    };
    let evaluation = Evaluation {
        modularity: q,
        nmi,
        communities: partition.len(),
        overlapping_nodes: partition.overlapping().len(),
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    report::write_json(
        &out.join(EVALUATION_FILE),
        &json!({
            "config": config,
            "modularity": evaluation.modularity,
            "modularity_graph": "cumulative",
            "nmi": evaluation.nmi,
            "communities": evaluation.communities,
            "overlapping_nodes": evaluation.overlapping_nodes,
            "hardening": HARDENING_RULE,
        }),
    )?;
    Ok(evaluation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Snapshot {
    /// Graph after the first phase's messages.
    Initial,
    /// Best-modularity graph.
    Final,
    /// Graph right after the given iteration.
    Iteration(usize),
}

impl FromStr for Snapshot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "initial" => Ok(Snapshot::Initial),
            "final" => Ok(Snapshot::Final),
            other => other.parse().map(Snapshot::Iteration).map_err(|_| {
                format!(
                    "unknown snapshot {other:?} (expected initial, final or an iteration number)"
                )
            }),
        }
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Snapshot::Initial => f.write_str("initial"),
            Snapshot::Final => f.write_str("final"),
            Snapshot::Iteration(k) => write!(f, "iteration-{k}"),
        }
    }
}

/// Re-runs the detection recorded in `out/summary.json` and writes the
/// chosen snapshot as `graph-<snapshot>.gexf` and `graph-<snapshot>.edges`.
pub fn cmd_export(out: &Path, snapshot: Snapshot) -> Result<(PathBuf, PathBuf)> {
    let summary = out.join(SUMMARY_FILE);
    if !summary.exists() {
        return Err(CliError::Usage(format!(
            "no completed run in {} (run detect first)",
            out.display()
        )));
    }
    let config = embedded_config(&report::read_json(&summary)?, &summary)?;
    let capture = match snapshot {
        Snapshot::Iteration(k) => Some(k),
        _ => None,
    };
    let result = run(&config, capture)?;

    // community ids follow the sorted partition, as in communities.json
    let components = |g: &InteractionGraph| -> BTreeMap<NodeId, usize> {
        let partition = g.connected_components();
        let mut out = BTreeMap::new();
        for comp in g.components() {
            let origins: std::collections::BTreeSet<u64> =
                comp.iter().filter_map(|&v| g.origin(v)).collect();
            let id = partition.communities().iter().position(|c| *c == origins);
            for v in comp {
                if let Some(id) = id {
                    out.insert(v, id);
                }
            }
        }
        out
    };
    let (graph, community): (&InteractionGraph, BTreeMap<NodeId, usize>) = match snapshot {
        Snapshot::Initial => {
            let labels = result.partition.harden(&result.initial).labels();
            let g = &result.initial;
            let map = g
                .nodes()
                .filter_map(|v| labels.get(&g.origin(v)?).map(|&c| (v, c)))
                .collect();
            (g, map)
        }
        Snapshot::Final => (&result.best, components(&result.best)),
        Snapshot::Iteration(_) => {
            let g = result.captured.as_ref().ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown snapshot: the run has {} iterations",
                    result.trace.records.len()
                ))
            })?;
            (g, components(g))
        }
    };

    let gexf_path = out.join(format!("graph-{snapshot}.gexf"));
    let edges_path = out.join(format!("graph-{snapshot}.edges"));
    let xml = gexf::to_gexf(
        graph,
        |v| community.get(&v).copied(),
        &format!("{snapshot} snapshot"),
    );
    std::fs::write(&gexf_path, xml).map_err(|e| CliError::io(&gexf_path, e))?;
    std::fs::write(&edges_path, gexf::to_edge_list(graph))
        .map_err(|e| CliError::io(&edges_path, e))?;
    Ok((gexf_path, edges_path))
}
