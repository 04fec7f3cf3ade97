//! Message-log and ground-truth readers, and equal-duration phase bucketing.
//!
//! Log lines are `sender<sep>receiver<sep>timestamp[<sep>size]` where the
//! separator is a comma or a run of whitespace. Timestamps are either epoch
//! seconds or ISO-8601 date-times; the first record fixes the style for the
//! whole file. Lines starting with `#` or `%` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DatasetId;
use crate::partition::Partition;

/// How a message contributes to edge weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Every message counts 1.0.
    Messages,
    /// Every message counts its character count (fourth column).
    Characters,
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "messages" => Ok(Weighting::Messages),
            "characters" => Ok(Weighting::Characters),
            other => Err(Error::Config(format!(
                "unknown weighting mode {other:?} (expected messages or characters)"
            ))),
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Messages => "messages",
            Weighting::Characters => "characters",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MessageEvent {
    pub sender: DatasetId,
    pub receiver: DatasetId,
    /// Seconds since the Unix epoch.
    pub timestamp: i64,
    pub size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TimeStyle {
    Epoch,
    Iso,
}

fn parse_iso(s: &str) -> Option<i64> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.timestamp());
    }
    const FORMATS: [&str; 4] = [
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y-%m-%d %H:%M",
        "%Y-%m-%dT%H:%M",
    ];
    for f in FORMATS {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, f) {
            return Some(t.and_utc().timestamp());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc().timestamp())
}

fn is_comment_or_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

fn split_fields(line: &str) -> Vec<String> {
    let line = line.trim();
    if line.contains(',') {
        return line.split(',').map(|f| f.trim().to_string()).collect();
    }
    let mut tokens: Vec<String> = line.split_whitespace().map(str::to_string).collect();
    // "2004-05-21 10:30:00" spans two whitespace tokens
    if tokens.len() >= 4
        && NaiveDate::parse_from_str(&tokens[2], "%Y-%m-%d").is_ok()
        && tokens[3].contains(':')
    {
        let time = tokens.remove(3);
        tokens[2] = format!("{} {}", tokens[2], time);
    }
    tokens
}

/// Parses message-log text. `origin` is used only in error messages.
pub fn parse_message_str(text: &str, mode: Weighting, origin: &Path) -> Result<Vec<MessageEvent>> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut style = None;
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if is_comment_or_blank(raw) {
            continue;
        }
        let fields = split_fields(raw);
        if !(3..=4).contains(&fields.len()) {
            return Err(err(
                line_no,
                format!("expected 3 or 4 fields, found {}", fields.len()),
            ));
        }
        let id = |s: &str| {
            s.parse::<DatasetId>()
                .map_err(|_| err(line_no, format!("invalid node id {s:?}")))
        };
        let sender = id(&fields[0])?;
        let receiver = id(&fields[1])?;

        let ts_field = fields[2].as_str();
        let this_style = if ts_field.parse::<i64>().is_ok() {
            TimeStyle::Epoch
        } else {
            TimeStyle::Iso
        };
        match style {
            None => style = Some(this_style),
            Some(s) if s != this_style => {
                return Err(err(
                    line_no,
                    format!("timestamp {ts_field:?} does not match the file's timestamp style"),
                ))
            }
            _ => {}
        }
        let timestamp = match this_style {
            TimeStyle::Epoch => ts_field.parse::<i64>().unwrap(),
            TimeStyle::Iso => parse_iso(ts_field)
                .ok_or_else(|| err(line_no, format!("unparseable timestamp {ts_field:?}")))?,
        };

        let size = match mode {
            Weighting::Messages => 1.0,
            Weighting::Characters => {
                let f = fields
                    .get(3)
                    .ok_or_else(|| err(line_no, "character mode needs a size column".into()))?;
                let v: f64 = f
                    .parse()
                    .map_err(|_| err(line_no, format!("invalid size {f:?}")))?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(err(line_no, format!("size must be positive, got {f}")));
                }
                v
            }
        };

        if sender == receiver {
            log::warn!(
                "{}:{line_no}: dropping self-message of node {sender}",
                origin.display()
            );
            continue;
        }
        events.push(MessageEvent {
            sender,
            receiver,
            timestamp,
            size,
        });
    }
    events.sort_by_key(|e| e.timestamp);
    Ok(events)
}

/// Reads a message log, returning events in nondecreasing timestamp order.
pub fn parse_message_log(path: impl AsRef<Path>, mode: Weighting) -> Result<Vec<MessageEvent>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_message_str(&text, mode, path)
}

/// Distinct dataset ids appearing as sender or receiver.
pub fn distinct_nodes(events: &[MessageEvent]) -> BTreeSet<DatasetId> {
    events.iter().flat_map(|e| [e.sender, e.receiver]).collect()
}

/// Events bucketed into consecutive equal-duration intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasedLog {
    pub phases: Vec<Vec<MessageEvent>>,
    /// `phases.len() + 1` monotone instants; phase k covers
    /// `[boundaries[k], boundaries[k+1])`, the last one closed on the right.
    pub boundaries: Vec<f64>,
}

impl PhasedLog {
    pub fn event_count(&self) -> usize {
        self.phases.iter().map(Vec::len).sum()
    }

    pub fn events(&self) -> impl Iterator<Item = &MessageEvent> {
        self.phases.iter().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.event_count() == 0
    }
}

/// Splits `[min_ts, max_ts]` into `n_phases` equal-length intervals and
/// assigns each event to one. A zero-length span puts everything in the
/// last phase.
pub fn partition_phases(events: &[MessageEvent], n_phases: usize) -> Result<PhasedLog> {
    if n_phases == 0 {
        return Err(Error::Config("n_phases must be at least 1".into()));
    }
    if events.is_empty() {
        return Err(Error::EmptyLog);
    }
    let mut sorted = events.to_vec();
    sorted.sort_by_key(|e| e.timestamp);
    let min = sorted[0].timestamp;
    let max = sorted[sorted.len() - 1].timestamp;
    let span = (max - min) as i128;
    let n = n_phases as i128;

    let boundaries = (0..=n_phases)
        .map(|k| min as f64 + (max - min) as f64 * k as f64 / n_phases as f64)
        .collect();
    let mut phases = vec![Vec::new(); n_phases];
    for e in sorted {
        // integer floor((t - min) * n / span) keeps bucket edges exact
        let k = if span == 0 {
            n - 1
        } else {
            (((e.timestamp - min) as i128 * n) / span).min(n - 1)
        };
        phases[k as usize].push(e);
    }
    Ok(PhasedLog { phases, boundaries })
}

/// Reference community labels keyed by dataset id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GroundTruth {
    pub labels: BTreeMap<DatasetId, String>,
}

impl GroundTruth {
    pub fn to_partition(&self) -> Partition {
        Partition::from_labels(self.labels.iter().map(|(id, l)| (*id, l.clone())))
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub fn parse_ground_truth_str(text: &str, origin: &Path) -> Result<GroundTruth> {
    let mut labels = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if is_comment_or_blank(raw) {
            continue;
        }
        let fields = split_fields(raw);
        let malformed = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: line_no,
            message,
        };
        if fields.len() != 2 || fields[1].is_empty() {
            return Err(malformed("expected node_id,label".into()));
        }
        let id: DatasetId = fields[0]
            .parse()
            .map_err(|_| malformed(format!("invalid node id {:?}", fields[0])))?;
        if labels.insert(id, fields[1].clone()).is_some() {
            return Err(Error::DuplicateId {
                path: PathBuf::from(origin),
                line: line_no,
                id,
            });
        }
    }
    Ok(GroundTruth { labels })
}

pub fn parse_ground_truth(path: impl AsRef<Path>) -> Result<GroundTruth> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_ground_truth_str(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, mode: Weighting) -> Result<Vec<MessageEvent>> {
        parse_message_str(text, mode, Path::new("test.log"))
    }

    fn at(ts: &[i64]) -> Vec<MessageEvent> {
        ts.iter()
            .map(|&t| MessageEvent {
                sender: 1,
                receiver: 2,
                timestamp: t,
                size: 1.0,
            })
            .collect()
    }

    #[test]
    fn character_and_message_modes() {
        let line = "1,2,2004-05-21 10:30:00,120";
        let t = NaiveDateTime::parse_from_str("2004-05-21 10:30:00", "%Y-%m-%d %H:%M:%S")
            .unwrap()
            .and_utc()
            .timestamp();
        let c = parse(line, Weighting::Characters).unwrap();
        assert_eq!(
            c,
            vec![MessageEvent {
                sender: 1,
                receiver: 2,
                timestamp: t,
                size: 120.0
            }]
        );
        let m = parse(line, Weighting::Messages).unwrap();
        assert_eq!(m[0].size, 1.0);
        assert_eq!(m[0].timestamp, t);
    }

    #[test]
    fn whitespace_separated_with_split_datetime() {
        let ev = parse(
            "# header\n% other\n\n3 4 2004-05-21 10:30:00 7\n",
            Weighting::Characters,
        )
        .unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!((ev[0].sender, ev[0].receiver, ev[0].size), (3, 4, 7.0));
    }

    #[test]
    fn epoch_timestamps_sorted() {
        let ev = parse("1 2 300\n2 3 100\n3 1 200", Weighting::Messages).unwrap();
        let ts: Vec<i64> = ev.iter().map(|e| e.timestamp).collect();
        assert_eq!(ts, vec![100, 200, 300]);
    }

    #[test]
    fn mixed_timestamp_styles_rejected() {
        let e = parse("1,2,100\n1,2,2004-05-21", Weighting::Messages).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn malformed_records_report_line() {
        for (text, line) in [
            ("1,2,100\nx,2,100", 2),
            ("1,2", 1),
            ("1,2,100,5,6", 1),
            ("1,2,notatime", 1),
        ] {
            match parse(text, Weighting::Messages) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(parse("1,2,100", Weighting::Characters).is_err());
        assert!(parse("1,2,100,0", Weighting::Characters).is_err());
    }

    #[test]
    fn empty_file_is_empty_list_and_self_messages_dropped() {
        assert!(parse("", Weighting::Messages).unwrap().is_empty());
        assert_eq!(parse("1,1,5\n1,2,6", Weighting::Messages).unwrap().len(), 1);
    }

    #[test]
    fn unknown_mode_is_config_error() {
        assert!(matches!(
            "bytes".parse::<Weighting>(),
            Err(Error::Config(_))
        ));
        assert_eq!(
            "characters".parse::<Weighting>().unwrap(),
            Weighting::Characters
        );
    }

    #[test]
    fn phases_of_equal_duration() {
        let log = partition_phases(&at(&[0, 1, 2, 3, 4, 5]), 3).unwrap();
        let sizes: Vec<usize> = log.phases.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 2, 2]);
        assert_eq!(log.boundaries.len(), 4);
        assert!((log.boundaries[1] - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(log.boundaries[3], 5.0);
    }

    #[test]
    fn single_phase_and_degenerate_span() {
        let one = partition_phases(&at(&[3, 9, 1]), 1).unwrap();
        assert_eq!(one.phases[0].len(), 3);
        let flat = partition_phases(&at(&[7, 7, 7]), 2).unwrap();
        assert_eq!(flat.phases[0].len(), 0);
        assert_eq!(flat.phases[1].len(), 3);
    }

    #[test]
    fn phase_errors() {
        assert!(matches!(partition_phases(&[], 2), Err(Error::EmptyLog)));
        assert!(matches!(
            partition_phases(&at(&[1]), 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn ground_truth_parsing() {
        let p = Path::new("truth");
        let gt = parse_ground_truth_str("1,A\n2,A\n3,B", p).unwrap();
        assert_eq!(gt.labels.len(), 3);
        assert_eq!(gt.labels[&3], "B");
        assert_eq!(gt.to_partition().len(), 2);
        assert!(parse_ground_truth_str("", p).unwrap().is_empty());
        assert!(matches!(
            parse_ground_truth_str("1,A\n1,B", p),
            Err(Error::DuplicateId { id: 1, line: 2, .. })
        ));
        assert!(parse_ground_truth_str("1", p).is_err());
    }
}
