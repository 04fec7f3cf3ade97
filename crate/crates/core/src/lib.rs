//! Overlapping community detection on temporally weighted message graphs.
//!
//! A message log is bucketed into phases; each phase reinforces or decays
//! edge weights, then edges with a high cut score are removed (or
//! high-split-betweenness vertices split) until the graph is empty, keeping
//! the partition with the best modularity.

pub mod centrality;
pub mod detector;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod partition;
pub mod scoring;

pub use centrality::{BetweennessScores, DistanceMode, SplitScores};
pub use detector::{
    detect, girvan_newman, Action, DetectionOutcome, DetectionTrace, Detector, DetectorConfig,
};
pub use dynamics::{apply_interval, DecayPolicy, IntervalReport};
pub use error::{Error, Result};
pub use graph::{DatasetId, EdgeKey, EdgeState, InteractionGraph, NodeId};
pub use ingest::{GroundTruth, MessageEvent, PhasedLog, Weighting};
pub use metrics::{modularity, nmi, ModularityWeighting};
pub use partition::Partition;
pub use scoring::{AlphaWeights, CutFormula, ScoringConfig};
