//! Reports and their two renderings. Structured output is JSON Lines under
//! the schema tag [`SCHEMA`]; keys are emitted in sorted order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use cobarkit_core::appendix::IdentityReport;
use cobarkit_core::homology::BettiTable;
use cobarkit_core::verdict::{Status, Verdict};

pub const SCHEMA: &str = "cobar-report/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Betti {
        label: String,
        table: BettiTable,
    },
    Verdict {
        check: String,
        verdict: Verdict,
    },
    /// A supporting verdict that does not enter the outcome.
    Route {
        check: String,
        verdict: Verdict,
    },
    Identity {
        fixture: String,
        field: String,
        report: IdentityReport,
    },
    Presentation {
        label: String,
        kind: String,
        generators: Vec<String>,
        relations: Vec<String>,
        oracle: Option<String>,
    },
    Counts {
        label: String,
        counts: Vec<usize>,
    },
    Budgets {
        entries: BTreeMap<String, usize>,
    },
    Error {
        message: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub args: BTreeMap<String, String>,
    pub records: Vec<Record>,
    /// Wall-clock phases in milliseconds, emitted only on request.
    pub timing: Vec<(String, f64)>,
}

/// Overall outcome; an error outranks a refutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Verified,
    Inconclusive,
    Refuted,
    Error,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Verified => "verified",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Refuted => "refuted",
            Outcome::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified | Outcome::Inconclusive => 0,
            Outcome::Refuted => 1,
            Outcome::Error => 2,
        }
    }
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report { command: command.into(), ..Report::default() }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn verdict(&mut self, check: impl Into<String>, verdict: Verdict) {
        self.records.push(Record::Verdict { check: check.into(), verdict });
    }

    pub fn error(&mut self, message: impl Into<String>) {
        self.records.push(Record::Error { message: message.into() });
    }

    pub fn outcome(&self) -> Outcome {
        let mut status = Status::Verified;
        for r in &self.records {
            match r {
                Record::Error { .. } => return Outcome::Error,
                Record::Verdict { verdict, .. } => status = status.and(verdict.status),
                Record::Identity { report, .. } => status = status.and(if report.passed { Status::Verified } else { Status::Refuted }),
                _ => {}
            }
        }
        match status {
            Status::Verified => Outcome::Verified,
            Status::Inconclusive => Outcome::Inconclusive,
            Status::Refuted => Outcome::Refuted,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome().exit_code()
    }

    /// Verdict records whose check name is `check`.
    pub fn verdicts(&self, check: &str) -> Vec<&Verdict> {
        self.records
            .iter()
            .filter_map(|r| match r {
                Record::Verdict { check: c, verdict } if c == check => Some(verdict),
                _ => None,
            })
            .collect()
    }

    pub fn betti(&self, label: &str) -> Option<&BettiTable> {
        self.records.iter().find_map(|r| match r {
            Record::Betti { label: l, table } if l == label => Some(table),
            _ => None,
        })
    }

    pub fn identities(&self) -> Vec<&IdentityReport> {
        self.records
            .iter()
            .filter_map(|r| match r {
                Record::Identity { report, .. } => Some(report),
                _ => None,
            })
            .collect()
    }
}

fn record_json(r: &Record) -> Value {
    match r {
        Record::Betti { label, table } => json!({
            "record": "betti",
            "label": label,
            "field": table.field.label(),
            "degrees": table.entries.iter().map(|e| json!({"degree": e.degree, "betti": e.betti, "exact": e.exact})).collect::<Vec<_>>(),
        }),
        Record::Verdict { check, verdict } => json!({
            "record": "verdict",
            "check": check,
            "status": verdict.status.as_str(),
            "evidence": verdict.evidence,
        }),
        Record::Route { check, verdict } => json!({
            "record": "route",
            "check": check,
            "status": verdict.status.as_str(),
            "evidence": verdict.evidence,
        }),
        Record::Identity { fixture, field, report } => json!({
            "record": "identity",
            "fixture": fixture,
            "field": field,
            "identity": report.identity,
            "passed": report.passed,
            "max_degree": report.max_degree,
            "checked": report.checked,
            "witness": report.witness,
        }),
        Record::Presentation { label, kind, generators, relations, oracle } => json!({
            "record": "presentation",
            "label": label,
            "kind": kind,
            "generators": generators,
            "relations": relations,
            "oracle": oracle,
        }),
        Record::Counts { label, counts } => json!({"record": "counts", "label": label, "counts": counts}),
        Record::Budgets { entries } => json!({"record": "budgets", "budgets": entries}),
        Record::Error { message } => json!({"record": "error", "message": message}),
    }
}

/// One JSON object per line: header, records, optional timing, summary.
pub fn structured(r: &Report, with_timing: bool) -> String {
    let mut out = String::new();
    let header = json!({
        "schema": SCHEMA,
        "record": "header",
        "command": r.command,
        "args": r.args,
        "version": VERSION,
    });
    let _ = writeln!(out, "{header}");
    for rec in &r.records {
        let _ = writeln!(out, "{}", record_json(rec));
    }
    if with_timing {
        for (phase, ms) in &r.timing {
            let _ = writeln!(out, "{}", json!({"record": "timing", "phase": phase, "ms": ms}));
        }
    }
    let o = r.outcome();
    let _ = writeln!(out, "{}", json!({"record": "summary", "status": o.as_str(), "exit": o.exit_code()}));
    out
}

fn flag(exact: bool) -> &'static str {
    if exact {
        "✓"
    } else {
        "≈"
    }
}

/// Tabular text for terminals.
pub fn human(r: &Report, with_timing: bool) -> String {
    let mut out = String::new();
    let args: Vec<String> = r.args.iter().map(|(k, v)| format!("--{k} {v}")).collect();
    let _ = writeln!(out, "cobarkit {VERSION}: {} {}", r.command, args.join(" "));
    for rec in &r.records {
        match rec {
            Record::Betti { label, table } => {
                let _ = writeln!(out, "\n{label} over {}", table.field);
                let _ = writeln!(out, "  degree  betti  exact");
                for e in &table.entries {
                    let _ = writeln!(out, "  {:>6}  {:>5}  {}", e.degree, e.betti, flag(e.exact));
                }
            }
            Record::Verdict { check, verdict } => {
                let _ = writeln!(out, "\n{check}: {}", verdict.status);
                for e in &verdict.evidence {
                    let _ = writeln!(out, "  - {e}");
                }
            }
            Record::Route { check, verdict } => {
                let _ = writeln!(out, "  {check}: {}", verdict.status);
                for e in &verdict.evidence {
                    let _ = writeln!(out, "    - {e}");
                }
            }
            Record::Identity { fixture, field, report } => {
                let mark = if report.passed { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{mark}  {:<40} {fixture} over {field}, degree ≤ {}, {} checks",
                    report.identity, report.max_degree, report.checked
                );
                if let Some(w) = &report.witness {
                    let _ = writeln!(out, "      first failure: {w}");
                }
            }
            Record::Presentation { label, kind, generators, relations, oracle } => {
                let _ = writeln!(out, "\n{label} ({kind})");
                let _ = writeln!(out, "  generators: {}", generators.join(", "));
                if relations.is_empty() {
                    let _ = writeln!(out, "  relations: none");
                } else {
                    let _ = writeln!(out, "  relations:");
                    for rel in relations {
                        let _ = writeln!(out, "    {rel}");
                    }
                }
                if let Some(o) = oracle {
                    let _ = writeln!(out, "  oracle: {o}");
                }
            }
            Record::Counts { label, counts } => {
                let c: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "{label}: {}", c.join(" "));
            }
            Record::Budgets { entries } => {
                let e: Vec<String> = entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(out, "budgets: {}", e.join(" "));
            }
            Record::Error { message } => {
                let _ = writeln!(out, "error: {message}");
            }
        }
    }
    if with_timing {
        for (phase, ms) in &r.timing {
            let _ = writeln!(out, "time {phase}: {ms:.1} ms");
        }
    }
    let _ = writeln!(out, "\nresult: {}", r.outcome().as_str());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cobarkit_core::homology::BettiEntry;
    use cobarkit_core::Field;

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("validate");
        let s = structured(&r, false);
        let lines: Vec<Value> = s.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0]["schema"], SCHEMA);
        assert_eq!(lines[1]["status"], "verified");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn exactness_flags_render() {
        let mut r = Report::new("chain-homology");
        let entries = vec![BettiEntry { degree: 0, betti: 1, exact: true }, BettiEntry { degree: 1, betti: 0, exact: false }];
        r.push(Record::Betti { label: "H".into(), table: BettiTable { field: Field::Rationals, entries } });
        let h = human(&r, false);
        assert!(h.contains('✓') && h.contains('≈'));
    }

    #[test]
    fn exit_status_contract() {
        let mut r = Report::new("check");
        r.verdict("a", Verdict::new(Status::Inconclusive));
        assert_eq!(r.exit_code(), 0);
        r.verdict("b", Verdict::new(Status::Refuted));
        assert_eq!(r.exit_code(), 1);
        r.error("boom");
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn timing_only_on_request() {
        let mut r = Report::new("validate");
        r.timing.push(("total".into(), 1.5));
        assert!(!structured(&r, false).contains("timing"));
        assert!(structured(&r, true).contains("\"timing\""));
    }
}
