//! Machine-readable run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::config::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// Samples kept per record; residuals beyond this are counted, not printed.
const MAX_SAMPLES: usize = 8;
const MAX_SAMPLE_LEN: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Every residual vanished.
    Zero,
    Nonzero,
    /// Computed outcome agrees with the expected one.
    Match,
    Mismatch,
    /// Informational output with nothing to compare.
    Info,
    Error,
}

impl Status {
    pub fn ok(self) -> bool {
        matches!(self, Status::Zero | Status::Match | Status::Info)
    }

    pub fn residual(zero: bool) -> Status {
        if zero {
            Status::Zero
        } else {
            Status::Nonzero
        }
    }

    pub fn expected(agree: bool) -> Status {
        if agree {
            Status::Match
        } else {
            Status::Mismatch
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub id: String,
    /// The exact statement this record certifies or reports on.
    pub statement: String,
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    pub samples: Vec<String>,
    /// Wall time; the only field that varies between identical runs.
    pub elapsed_ms: f64,
}

impl Record {
    pub fn new(id: impl Into<String>, statement: impl Into<String>) -> Self {
        Record {
            id: id.into(),
            statement: statement.into(),
            inputs: BTreeMap::new(),
            status: Status::Info,
            samples: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn samples<I: IntoIterator<Item = S>, S: ToString>(mut self, it: I) -> Self {
        let mut extra = 0;
        for s in it {
            if self.samples.len() < MAX_SAMPLES {
                let mut s = s.to_string();
                if s.len() > MAX_SAMPLE_LEN {
                    let cut = (0..=MAX_SAMPLE_LEN).rev().find(|&k| s.is_char_boundary(k)).unwrap_or(0);
                    s.truncate(cut);
                    s.push_str(" ...");
                }
                self.samples.push(s);
            } else {
                extra += 1;
            }
        }
        if extra > 0 {
            self.samples.push(format!("({extra} more)"));
        }
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn error(id: impl Into<String>, statement: impl Into<String>, err: impl ToString) -> Self {
        Record::new(id, statement).status(Status::Error).samples([err])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// What a passing run establishes, including its finite scope.
    pub statement: String,
    pub config: BTreeMap<String, String>,
    pub records: Vec<Record>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, statement: impl Into<String>, config: BTreeMap<String, String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            statement: statement.into(),
            config,
            records: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.passed &= r.status.ok();
        self.records.push(r);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.statement);
        for (k, v) in &self.config {
            let _ = writeln!(out, "  {k} = {v}");
        }
        for r in &self.records {
            let _ = writeln!(out, "[{}] {} {}", status_label(r.status), r.id, r.statement);
            if !r.inputs.is_empty() {
                let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(out, "    inputs: {}", inputs.join(", "));
            }
            for s in &r.samples {
                let _ = writeln!(out, "    {s}");
            }
        }
        let ok = self.records.iter().filter(|r| r.status.ok()).count();
        let _ = writeln!(
            out,
            "{}: {ok}/{} records ok",
            if self.passed { "PASS" } else { "FAIL" },
            self.records.len()
        );
        out
    }
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Zero => "zero",
        Status::Nonzero => "NONZERO",
        Status::Match => "match",
        Status::Mismatch => "MISMATCH",
        Status::Info => "info",
        Status::Error => "ERROR",
    }
}
