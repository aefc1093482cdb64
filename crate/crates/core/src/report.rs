//! Verification reports: one record per checked instance, serialized as JSON Lines.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The statement does not apply to this instance; never counted as a failure.
    HypothesisNotMet,
}

/// One checked instance. `margin` is signed so that a non-negative value means the check held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub status: Status,
    pub quantity: f64,
    pub bound: f64,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl InstanceRecord {
    /// Record for a `quantity ≤ bound` check with additive slack `tol`.
    pub fn upper(id: impl Into<String>, quantity: f64, bound: f64, tol: f64) -> Self {
        let margin = bound - quantity;
        InstanceRecord {
            id: id.into(),
            status: if margin >= -tol { Status::Pass } else { Status::Fail },
            quantity,
            bound,
            margin,
            detail: String::new(),
        }
    }

    /// Record for a `quantity ≥ bound` check with additive slack `tol`.
    pub fn lower(id: impl Into<String>, quantity: f64, bound: f64, tol: f64) -> Self {
        let mut r = InstanceRecord::upper(id, -quantity, -bound, tol);
        r.quantity = quantity;
        r.bound = bound;
        r
    }

    pub fn not_applicable(id: impl Into<String>, detail: impl Into<String>) -> Self {
        InstanceRecord {
            id: id.into(),
            status: Status::HypothesisNotMet,
            quantity: 0.0,
            bound: 0.0,
            margin: 0.0,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Downgrades a passing record to a failure, recording why.
    pub fn fail_with(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Fail;
        let why = why.into();
        self.detail = if self.detail.is_empty() { why } else { format!("{}; {why}", self.detail) };
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub version: String,
    pub records: Vec<InstanceRecord>,
    /// Free-form observations (extremal graphs, tables) that are not pass/fail checks.
    pub notes: Vec<String>,
    pub wall_time_s: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header { suite: String, version: String },
    Record(InstanceRecord),
    Note { text: String },
    Summary { summary: Summary, wall_time_s: f64 },
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            records: Vec::new(),
            notes: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn push(&mut self, r: InstanceRecord) {
        self.records.push(r);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn set_wall_time(&mut self, d: Duration) {
        self.wall_time_s = d.as_secs_f64();
    }

    pub fn summary(&self) -> Summary {
        let count = |s: Status| self.records.iter().filter(|r| r.status == s).count();
        Summary {
            instances: self.records.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            hypothesis_not_met: count(Status::HypothesisNotMet),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary().fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    /// Header line, one line per record, one per note, and a closing summary line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut put = |l: &Line| {
            out.push_str(&serde_json::to_string(l).expect("report lines serialize"));
            out.push('\n');
        };
        put(&Line::Header { suite: self.suite.clone(), version: self.version.clone() });
        for r in &self.records {
            put(&Line::Record(r.clone()));
        }
        for t in &self.notes {
            put(&Line::Note { text: t.clone() });
        }
        put(&Line::Summary { summary: self.summary(), wall_time_s: self.wall_time_s });
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut report: Option<VerificationReport> = None;
        let mut stated: Option<Summary> = None;
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let line: Line = serde_json::from_str(raw).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            let missing = || Error::Parse { line: i + 1, msg: "record before header".into() };
            match line {
                Line::Header { suite, version } => {
                    let mut r = VerificationReport::new(suite);
                    r.version = version;
                    report = Some(r);
                }
                Line::Record(rec) => report.as_mut().ok_or_else(missing)?.records.push(rec),
                Line::Note { text } => report.as_mut().ok_or_else(missing)?.notes.push(text),
                Line::Summary { summary, wall_time_s } => {
                    report.as_mut().ok_or_else(missing)?.wall_time_s = wall_time_s;
                    stated = Some(summary);
                }
            }
        }
        let report = report.ok_or(Error::Parse { line: 0, msg: "empty report".into() })?;
        if let Some(s) = stated {
            if s != report.summary() {
                return Err(Error::Parse { line: 0, msg: "summary does not match records".into() });
            }
        }
        Ok(report)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,status,quantity,bound,margin,detail\n");
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::HypothesisNotMet => "hypothesis_not_met",
            };
            out.push_str(&format!(
                "{},{status},{:.15e},{:.15e},{:.15e},{}\n",
                csv_field(&r.id),
                r.quantity,
                r.bound,
                r.margin,
                csv_field(&r.detail)
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("demo");
        r.push(InstanceRecord::upper("a", 0.1, 0.2, 1e-9));
        r.push(InstanceRecord::lower("b", 1.0, 3.0, 1e-9).with_detail("x, \"y\""));
        r.push(InstanceRecord::not_applicable("c", "diameter too small"));
        r.note("max ratio 0.25");
        r.wall_time_s = 0.5;
        r
    }

    #[test]
    fn counts_add_up() {
        let s = sample().summary();
        assert_eq!(s, Summary { instances: 3, pass: 1, fail: 1, hypothesis_not_met: 1 });
        assert_eq!(s.pass + s.fail + s.hypothesis_not_met, s.instances);
        assert!(!sample().all_pass());
    }

    #[test]
    fn lower_margin_sign() {
        let r = InstanceRecord::lower("x", 5.0, 3.0, 0.0);
        assert_eq!(r.margin, 2.0);
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn jsonl_round_trip() {
        let r = sample();
        let text = r.to_jsonl();
        assert_eq!(text.lines().count(), 1 + 3 + 1 + 1);
        assert_eq!(VerificationReport::from_jsonl(&text).unwrap(), r);
    }

    #[test]
    fn tampered_summary_is_rejected() {
        let text = sample().to_jsonl().replace("\"pass\":1", "\"pass\":2");
        assert!(VerificationReport::from_jsonl(&text).is_err());
    }

    #[test]
    fn csv_quotes_fields() {
        let csv = sample().to_csv();
        assert!(csv.contains("\"x, \"\"y\"\"\""));
        assert_eq!(csv.lines().count(), 4);
    }
}
