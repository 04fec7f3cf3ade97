use std::path::PathBuf;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("self-loop rejected on node {0}")]
    SelfLoop(NodeId),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("message amount must be positive and finite, got {0}")]
    NonPositiveAmount(f64),

    #[error("invalid split of node {node}: {reason}")]
    InvalidSplit { node: NodeId, reason: &'static str },

    #[error("edge {0}-{1} has nonpositive weight {2}; inverse-weight distances are undefined")]
    NonPositiveWeight(NodeId, NodeId, f64),

    #[error("brute-force oracle limited to {cap} nodes, graph has {nodes}")]
    OracleCapExceeded { cap: usize, nodes: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("message log is empty")]
    EmptyLog,

    #[error("{path}:{line}: duplicate node id {id}")]
    DuplicateId { path: PathBuf, line: usize, id: u64 },

    #[error("modularity is undefined on a graph without edges")]
    NoEdges,

    #[error("partition is overlapping on node {0}; harden it first")]
    OverlappingPartition(u64),

    #[error("found partition and ground truth share no node ids")]
    NoCommonNodes,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
