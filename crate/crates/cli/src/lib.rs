//! Report plumbing and subcommand implementations for the `friedlab` binary.
//!
//! Every command produces a [`RunReport`]; the binary prints it and exits
//! with [`RunReport::exit_code`]. Usage and I/O problems surface as
//! [`CliError`] before any check runs.

pub mod commands;
pub mod gaussian;

use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to the model; never affects the exit code.
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub detail: String,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub arithmetic: &'static str,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    /// Command-specific tables (series dumps, η tables, ...).
    pub data: BTreeMap<String, serde_json::Value>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub exit_code: i32,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("$ {}\n", self.command.join(" ")));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let res = c.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!("{tag}  {:<40} {:>10}  {}\n", c.name, res, c.detail));
        }
        for (k, v) in &self.data {
            out.push_str(&format!("\n[{k}]\n"));
            match v {
                serde_json::Value::Array(rows) => {
                    for r in rows {
                        out.push_str(&format!("  {}\n", compact(r)));
                    }
                }
                serde_json::Value::Object(map) => {
                    for (key, val) in map {
                        out.push_str(&format!("  {key}: {}\n", compact(val)));
                    }
                }
                other => out.push_str(&format!("  {}\n", compact(other))),
            }
        }
        out.push_str(&format!(
            "\n{} passed, {} failed, {} skipped (exit {})\n",
            self.passed, self.failed, self.skipped, self.exit_code
        ));
        out
    }
}

fn compact(v: &serde_json::Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub tol: f64,
    /// Exact mode demands residual 0 for exact identities; float mode
    /// accepts anything within `tol`.
    pub exact: bool,
    pub seed: u64,
    pub samples: usize,
    pub parallel: bool,
    /// Zero out elapsed times so that reports are byte-for-byte repeatable.
    pub timing: bool,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings { tol: DEFAULT_TOL, exact: true, seed: 0, samples: 100, parallel: false, timing: true }
    }
}

/// Result of one check before timing is attached.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub residual: Option<f64>,
    pub detail: String,
}

impl Outcome {
    pub fn flag(passed: bool, detail: impl Into<String>) -> Outcome {
        Outcome { passed, residual: None, detail: detail.into() }
    }

    pub fn within(residual: f64, tol: f64, detail: impl Into<String>) -> Outcome {
        Outcome { passed: residual <= tol, residual: Some(residual), detail: detail.into() }
    }
}

pub struct Runner {
    settings: Settings,
    command: Vec<String>,
    checks: Vec<Check>,
    data: BTreeMap<String, serde_json::Value>,
}

impl Runner {
    pub fn new(command: Vec<String>, settings: &Settings) -> Runner {
        Runner { settings: settings.clone(), command, checks: Vec::new(), data: BTreeMap::new() }
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    /// Gate for identities that hold exactly in exact arithmetic.
    pub fn exact(&self, residual: f64, detail: impl Into<String>) -> Outcome {
        let tol = if self.settings.exact { 0.0 } else { self.settings.tol };
        Outcome::within(residual, tol, detail)
    }

    /// Gate for floating point evaluations.
    pub fn numeric(&self, residual: f64, detail: impl Into<String>) -> Outcome {
        Outcome::within(residual, self.settings.tol, detail)
    }

    /// Runs a check; an `Err` counts as a failure with the message as detail.
    pub fn check(&mut self, name: &str, f: impl FnOnce(&Runner) -> Result<Outcome, String>) -> bool {
        let t0 = Instant::now();
        let out = f(self).unwrap_or_else(|e| Outcome::flag(false, e));
        let elapsed_ms = if self.settings.timing { t0.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        let passed = out.passed;
        self.checks.push(Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            residual: out.residual,
            detail: out.detail,
            elapsed_ms,
        });
        passed
    }

    pub fn skip(&mut self, name: &str, why: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status: Status::Skip, residual: None, detail: why.into(), elapsed_ms: 0.0 });
    }

    pub fn data(&mut self, key: &str, v: serde_json::Value) {
        self.data.insert(key.into(), v);
    }

    pub fn finish(self) -> RunReport {
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
        RunReport {
            command: self.command,
            arithmetic: if self.settings.exact { "exact" } else { "float" },
            tolerance: self.settings.tol,
            checks: self.checks,
            data: self.data,
            passed,
            failed,
            skipped,
            exit_code: if failed == 0 { EXIT_PASS } else { EXIT_FAIL },
        }
    }
}
