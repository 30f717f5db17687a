//! Structured results of a verification run.

use std::fmt::Write as _;

use serde::Serialize;

use crate::outcome::{Outcome, Status, Witness};

/// Aggregate of one identity over all its inputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub id: String,
    pub locus: String,
    pub status: Status,
    pub checked: usize,
    pub failed: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Record {
    /// Folds per-input outcomes (in input order) into one record. The first
    /// failure in input order becomes the witness.
    pub fn from_outcomes(id: &str, locus: &str, outcomes: Vec<Outcome>) -> Record {
        let mut r = Record {
            id: id.to_string(),
            locus: locus.to_string(),
            status: Status::SkippedTruncation,
            checked: 0,
            failed: 0,
            skipped: 0,
            witness: None,
            skip_reason: None,
            wall_ms: None,
        };
        for o in outcomes {
            match o {
                Outcome::Pass => r.checked += 1,
                Outcome::Fail(w) => {
                    r.checked += 1;
                    r.failed += 1;
                    if r.witness.is_none() {
                        r.witness = Some(w);
                    }
                }
                Outcome::Skipped(reason) => {
                    r.skipped += 1;
                    if r.skip_reason.is_none() {
                        r.skip_reason = Some(reason);
                    }
                }
            }
        }
        r.status = if r.failed > 0 {
            Status::Fail
        } else if r.checked > 0 {
            Status::Pass
        } else {
            Status::SkippedTruncation
        };
        r
    }
}

/// Key-value pairs as a JSON object, in their given order.
fn as_map<S: serde::Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().map(|(k, v)| (k, v)))
}

/// The instance a report refers to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceInfo {
    pub name: String,
    pub a: i64,
    pub b: i64,
    pub generators: usize,
    pub pool: Vec<String>,
    #[serde(serialize_with = "as_map")]
    pub params: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub instance: InstanceInfo,
    #[serde(serialize_with = "as_map")]
    pub settings: Vec<(String, String)>,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub status: Status,
}

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ALL_SKIPPED: i32 = 3;

impl Report {
    pub fn new(
        command: &str,
        instance: InstanceInfo,
        settings: Vec<(String, String)>,
        records: Vec<Record>,
    ) -> Report {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::SkippedTruncation => summary.skipped += 1,
            }
        }
        let status = if summary.fail > 0 {
            Status::Fail
        } else if summary.pass > 0 {
            Status::Pass
        } else {
            Status::SkippedTruncation
        };
        Report {
            command: command.to_string(),
            instance,
            settings,
            records,
            summary,
            status,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::SkippedTruncation => EXIT_ALL_SKIPPED,
        }
    }

    pub fn get(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let i = &self.instance;
        let _ = writeln!(s, "{} on {} (a={}, b={}, {} generators)", self.command, i.name, i.a, i.b, i.generators);
        if !i.params.is_empty() {
            let p: Vec<String> = i.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "params: {}", p.join(" "));
        }
        let _ = writeln!(s, "pool: {}", i.pool.join(", "));
        let st: Vec<String> = self.settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "settings: {}", st.join(" "));
        let width = self.records.iter().map(|r| r.id.len()).max().unwrap_or(0);
        for r in &self.records {
            let _ = write!(
                s,
                "{:<18} {:<width$}  checked={} failed={} skipped={}",
                r.status.as_str(),
                r.id,
                r.checked,
                r.failed,
                r.skipped
            );
            if let Some(ms) = r.wall_ms {
                let _ = write!(s, " time={ms}ms");
            }
            s.push('\n');
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "    input: {}", w.input);
                let _ = writeln!(s, "    lhs:   {}", w.lhs);
                let _ = writeln!(s, "    rhs:   {}", w.rhs);
            }
        }
        let _ = writeln!(
            s,
            "overall: {} (pass={} fail={} skipped={})",
            self.status.as_str(),
            self.summary.pass,
            self.summary.fail,
            self.summary.skipped
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Witness {
        Witness { input: "x".into(), lhs: "1".into(), rhs: "2".into() }
    }

    #[test]
    fn record_status_rules() {
        let r = Record::from_outcomes("id", "l", vec![Outcome::Pass, Outcome::Skipped("t".into())]);
        assert_eq!((r.status, r.checked, r.skipped), (Status::Pass, 1, 1));
        let r = Record::from_outcomes("id", "l", vec![Outcome::Skipped("t".into())]);
        assert_eq!(r.status, Status::SkippedTruncation);
        let r = Record::from_outcomes("id", "l", vec![Outcome::Pass, Outcome::Fail(w()), Outcome::Fail(w())]);
        assert_eq!((r.status, r.failed), (Status::Fail, 2));
        assert_eq!(r.witness, Some(w()));
        let r = Record::from_outcomes("id", "l", vec![]);
        assert_eq!(r.status, Status::SkippedTruncation);
    }

    #[test]
    fn report_exit_codes() {
        let info = InstanceInfo { name: "t".into(), a: 0, b: 0, generators: 1, pool: vec![], params: vec![] };
        let pass = Record::from_outcomes("p", "l", vec![Outcome::Pass]);
        let skip = Record::from_outcomes("s", "l", vec![Outcome::Skipped("t".into())]);
        let fail = Record::from_outcomes("f", "l", vec![Outcome::Fail(w())]);
        let rep = |rs: Vec<Record>| Report::new("c", info.clone(), vec![], rs);
        assert_eq!(rep(vec![pass.clone(), skip.clone()]).exit_code(), EXIT_PASS);
        assert_eq!(rep(vec![pass, fail]).exit_code(), EXIT_FAIL);
        assert_eq!(rep(vec![skip]).exit_code(), EXIT_ALL_SKIPPED);
        let r = rep(vec![]);
        assert!(r.to_json().ends_with("}\n"));
    }
}
