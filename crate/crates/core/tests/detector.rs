mod common;

use std::collections::BTreeSet;

use dyncomm_core::ingest::partition_phases;
use dyncomm_core::metrics::nmi_partitions;
use dyncomm_core::{
    detect, girvan_newman, Action, CutFormula, Detector, DetectorConfig, DistanceMode,
    InteractionGraph, MessageEvent, Partition,
};
use rand::prelude::*;

use common::{clique, random_connected, rng};

fn set(ids: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    ids.into_iter().collect()
}

/// Every edge of two bridged K4s carries one message per phase.
fn uniform_log(phases: i64) -> Vec<MessageEvent> {
    let mut edges = clique(&[1, 2, 3, 4]);
    edges.extend(clique(&[5, 6, 7, 8]));
    edges.push((4, 5, 1.0));
    let mut out = Vec::new();
    for p in 0..phases {
        for (i, &(a, b, _)) in edges.iter().enumerate() {
            out.push(MessageEvent {
                sender: a,
                receiver: b,
                timestamp: p * 3600 + i as i64,
                size: 1.0,
            });
        }
    }
    out
}

#[test]
fn planted_bridge_is_recovered() {
    let events = uniform_log(6);
    let log = partition_phases(&events, 6).unwrap();
    let out = detect(&log, &DetectorConfig::default()).unwrap();
    match &out.trace.records[0].action {
        Action::RemoveEdge { origins, .. } => assert_eq!(*origins, (4, 5)),
        other => panic!("first action was {other:?}"),
    }
    let truth = Partition::new(vec![set(1..=4), set(5..=8)]);
    assert_eq!(out.partition, truth);
    assert_eq!(nmi_partitions(&out.partition, &truth).unwrap(), 1.0);
}

fn gn_config() -> DetectorConfig {
    let mut cfg = DetectorConfig {
        allow_splitting: false,
        distance: DistanceMode::Unit,
        ..DetectorConfig::default()
    };
    cfg.scoring.formula = CutFormula::Betweenness;
    cfg
}

#[test]
fn reduces_to_girvan_newman() {
    let mut r = rng(53);
    for i in 0..20 {
        let n = r.gen_range(2..=30);
        let g = random_connected(&mut r, n, (4.0 / n as f64).min(0.5));
        let (gn_partition, gn_trace) = girvan_newman(&g, usize::MAX).unwrap();
        let out = Detector::new(gn_config()).run_graph(g).unwrap();
        let ours: Vec<&Action> = out.trace.actions().collect();
        let theirs: Vec<&Action> = gn_trace.actions().collect();
        assert_eq!(ours, theirs, "graph {i}");
        assert_eq!(out.partition, gn_partition, "graph {i}");
        assert_eq!(out.trace.best_iteration, gn_trace.best_iteration);
    }
}

/// 13 users, 26 ties: three 4-cliques, a broker tied to three members of
/// each of the first two, and single links from both to the third.
fn broker_fixture() -> InteractionGraph {
    let mut e = clique(&[1, 2, 3, 4]);
    e.extend(clique(&[5, 6, 7, 8]));
    e.extend(clique(&[9, 10, 11, 12]));
    e.extend([1, 2, 3, 5, 6, 7].map(|v| (0, v, 1.0)));
    e.extend([(4, 9, 1.0), (8, 12, 1.0)]);
    InteractionGraph::from_weighted_edges(e).unwrap()
}

#[test]
fn broker_fixture_removes_then_splits_once() {
    let g = broker_fixture();
    assert_eq!((g.node_count(), g.edge_count()), (13, 26));
    let out = Detector::new(DetectorConfig::default())
        .run_graph(g)
        .unwrap();
    let best = out.trace.best_iteration.unwrap();
    let leading: Vec<&Action> = out.trace.actions().take(best + 1).collect();
    let splits = leading.iter().filter(|a| a.is_split()).count();
    assert_eq!(splits, 1, "{leading:?}");
    assert!(leading.len() > splits);
    assert!(!leading[0].is_split());
    assert_eq!(out.partition.overlapping(), set([0]));
    assert_eq!(out.partition.len(), 3);
}

fn random_events(r: &mut impl Rng, n: u64, count: usize) -> Vec<MessageEvent> {
    (0..count)
        .filter_map(|_| {
            let a = r.gen_range(0..n);
            let b = r.gen_range(0..n);
            (a != b).then(|| MessageEvent {
                sender: a,
                receiver: b,
                timestamp: r.gen_range(0..100_000),
                size: r.gen_range(1..200) as f64,
            })
        })
        .collect()
}

#[test]
fn runs_are_deterministic_and_cover_all_ids() {
    let mut r = rng(59);
    for _ in 0..10 {
        let n = r.gen_range(4..16);
        let mut events = random_events(&mut r, n, 80);
        events.sort_by_key(|e| e.timestamp);
        let log = partition_phases(&events, 4).unwrap();
        let cfg = DetectorConfig::default();
        let a = detect(&log, &cfg).unwrap();
        let b = detect(&log, &cfg).unwrap();
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.trace, b.trace);

        let ids: BTreeSet<u64> = events.iter().flat_map(|e| [e.sender, e.receiver]).collect();
        assert_eq!(a.partition.members(), ids);

        let best = a.trace.best_iteration.unwrap();
        let q_max = a
            .trace
            .records
            .iter()
            .map(|rec| rec.modularity)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(a.trace.records[best].modularity, q_max);
        assert!(a.trace.records[..best]
            .iter()
            .all(|rec| rec.modularity < q_max));
    }
}
