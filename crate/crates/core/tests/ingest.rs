use std::io::Write;

use dyncomm_core::ingest::{
    distinct_nodes, parse_ground_truth, parse_message_log, partition_phases,
};
use dyncomm_core::{Error, Weighting};

#[test]
fn reads_log_and_truth_files() {
    let mut log = tempfile::NamedTempFile::new().unwrap();
    writeln!(log, "% comment\n1,2,1978-02-01 10:00:00,40\n2 3 1978-02-01 11:00:00 10\n3,3,1978-02-02 00:00:00,5\n1,3,1978-02-03 00:00:00").unwrap();
    let events = parse_message_log(log.path(), Weighting::Characters);
    // the last record has no size, which characters mode rejects
    assert!(matches!(events, Err(Error::Parse { line: 5, .. })));

    let events = parse_message_log(log.path(), Weighting::Messages).unwrap();
    assert_eq!(events.len(), 3);
    assert!(events.iter().all(|e| e.size == 1.0));
    assert_eq!(distinct_nodes(&events).len(), 3);
    let phased = partition_phases(&events, 2).unwrap();
    assert_eq!(
        phased.phases.iter().map(Vec::len).collect::<Vec<_>>(),
        [2, 1]
    );

    let mut truth = tempfile::NamedTempFile::new().unwrap();
    writeln!(truth, "# node_id,label\n1,x\n2,x\n3,y").unwrap();
    let t = parse_ground_truth(truth.path()).unwrap();
    assert_eq!(t.to_partition().len(), 2);
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let r = parse_message_log(dir.path().join("absent.csv"), Weighting::Messages);
    assert!(matches!(r, Err(Error::Io { .. })));
}
