//! Line-oriented run reports.
//!
//! A report is the invoked command, a sequence of info lines and check
//! records in the order they were produced, and a final result line. With
//! timing disabled every elapsed time prints as 0, so two runs with the same
//! arguments and seed render byte-identical text.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub elapsed: Duration,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entry {
    Info(String),
    Check(CheckRecord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    command: Vec<String>,
    entries: Vec<Entry>,
    timing: bool,
}

impl RunReport {
    pub fn new(command: Vec<String>, timing: bool) -> Self {
        RunReport { command, entries: Vec::new(), timing }
    }

    pub fn info(&mut self, line: impl Into<String>) {
        self.entries.push(Entry::Info(line.into()));
    }

    pub fn record(&mut self, rec: CheckRecord) {
        self.entries.push(Entry::Check(rec));
    }

    /// Times `f` and records its outcome; `Err` carries the counterexample.
    pub fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(), String>) -> bool {
        let start = Instant::now();
        let outcome = f();
        let passed = outcome.is_ok();
        self.record(CheckRecord { name: name.into(), passed, elapsed: start.elapsed(), counterexample: outcome.err() });
        passed
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Check(c) => Some(c),
            Entry::Info(_) => None,
        })
    }

    /// Failure iff some check failed.
    pub fn passed(&self) -> bool {
        self.checks().all(|c| c.passed)
    }

    /// Everything after the command line.
    pub fn body(&self) -> String {
        let text = self.to_string();
        text.split_once('\n').map(|(_, rest)| rest.to_string()).unwrap_or_default()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "COMMAND {}", self.command.join(" "))?;
        for e in &self.entries {
            match e {
                Entry::Info(line) => writeln!(f, "{line}")?,
                Entry::Check(c) => {
                    let millis = if self.timing { c.elapsed.as_millis() } else { 0 };
                    write!(f, "CHECK {} {} {millis}", c.name, if c.passed { "PASS" } else { "FAIL" })?;
                    if let Some(cx) = &c.counterexample {
                        // keep one record per line
                        write!(f, " {}", cx.replace('\n', " "))?;
                    }
                    writeln!(f)?;
                }
            }
        }
        writeln!(f, "RESULT {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}
