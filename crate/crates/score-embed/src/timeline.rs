//! Day-level aggregation of classified timestamped text.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{DateTime, NaiveDate, Utc};
use serde::Deserialize;

use crate::error::{Error, Result};

/// One input record: an RFC 3339 timestamp and a text body.
#[derive(Debug, Deserialize)]
struct TimelineRecord {
    ts: String,
    text: String,
}

/// Per-day class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DayCounts {
    /// Number of accepted records per class index.
    pub counts: Vec<usize>,
}

impl DayCounts {
    fn new(classes: usize) -> Self {
        DayCounts {
            counts: vec![0; classes],
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Aggregation result over one input stream.
#[derive(Debug, Clone)]
pub struct TimelineReport {
    /// Day buckets in calendar order. Timestamps are converted to UTC
    /// before the date is taken.
    pub buckets: BTreeMap<NaiveDate, DayCounts>,
    pub classes: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// One (line number, reason) pair per rejected input line.
    pub reject_reasons: Vec<(usize, String)>,
}

impl TimelineReport {
    /// CSV with one row per day: date, total, then one count column per class.
    pub fn to_csv(&self, labels: &[String]) -> Result<String> {
        if labels.len() != self.classes {
            return Err(Error::invalid(format!(
                "{} labels supplied for {} classes",
                labels.len(),
                self.classes
            )));
        }
        let mut out = String::from("date,total");
        for name in labels {
            out.push_str(",count_");
            out.push_str(name);
        }
        out.push('\n');
        for (date, day) in &self.buckets {
            out.push_str(&format!("{},{}", date.format("%Y-%m-%d"), day.total()));
            for count in &day.counts {
                out.push_str(&format!(",{count}"));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Parses JSONL records and folds classifier outputs into day buckets.
///
/// `classify` returns the class index for a text, or `None` when the text
/// cannot be classified (for example when it tokenizes to nothing); such
/// records are rejected rather than silently dropped. Lines that fail to
/// parse, carry an invalid timestamp, or yield an out-of-range class are
/// rejected the same way. Every input line is either accepted or rejected:
/// `accepted + rejected` always equals the number of lines read.
pub fn aggregate_timeline<F>(input: &str, classes: usize, classify: F) -> Result<TimelineReport>
where
    F: Fn(&str) -> Option<usize>,
{
    if classes == 0 {
        return Err(Error::invalid("timeline needs at least one class".to_string()));
    }
    let mut buckets: BTreeMap<NaiveDate, DayCounts> = BTreeMap::new();
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut reject_reasons = Vec::new();
    let mut total_lines = 0usize;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        total_lines += 1;
        if line.trim().is_empty() {
            rejected += 1;
            reject_reasons.push((line_no, "empty line".to_string()));
            continue;
        }
        let record: TimelineRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                rejected += 1;
                reject_reasons.push((line_no, format!("invalid JSON: {e}")));
                continue;
            }
        };
        let ts: DateTime<Utc> = match DateTime::parse_from_rfc3339(&record.ts) {
            Ok(t) => t.with_timezone(&Utc),
            Err(e) => {
                rejected += 1;
                reject_reasons.push((line_no, format!("invalid timestamp {:?}: {e}", record.ts)));
                continue;
            }
        };
        let class = match classify(&record.text) {
            Some(c) => c,
            None => {
                rejected += 1;
                reject_reasons.push((line_no, "text could not be classified".to_string()));
                continue;
            }
        };
        if class >= classes {
            rejected += 1;
            reject_reasons.push((
                line_no,
                format!("class index {class} out of range for {classes} classes"),
            ));
            continue;
        }
        let day = buckets
            .entry(ts.date_naive())
            .or_insert_with(|| DayCounts::new(classes));
        day.counts[class] += 1;
        accepted += 1;
    }
    debug_assert_eq!(accepted + rejected, total_lines);
    Ok(TimelineReport {
        buckets,
        classes,
        accepted,
        rejected,
        reject_reasons,
    })
}

/// Reads a JSONL file and aggregates it.
pub fn aggregate_timeline_file<F>(
    path: &Path,
    classes: usize,
    classify: F,
) -> Result<TimelineReport>
where
    F: Fn(&str) -> Option<usize>,
{
    let input = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    aggregate_timeline(&input, classes, classify)
}
