//! Verdict reports shared by every checker.

use std::fmt;

use serde::Serialize;

/// One named verification with its exact residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// The computed residual, rendered exactly; `"0"` when it vanishes.
    pub residual: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, residual: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            residual: residual.into(),
            note: None,
        }
    }

    /// A check that passes iff `residual` renders as zero.
    pub fn zero(name: impl Into<String>, residual: &impl fmt::Display) -> Check {
        let r = residual.to_string();
        Check::new(name, r == "0", r)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

/// Parameters of a randomized or sampled check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Sampling>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> CheckReport {
        CheckReport {
            title: title.into(),
            checks: Vec::new(),
            sampling: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        if let Some(s) = &self.sampling {
            writeln!(f, "  seed = {}, samples = {}", s.seed, s.samples)?;
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{tag}] {} = {}", c.name, c.residual)?;
            if let Some(n) = &c.note {
                writeln!(f, "         {n}")?;
            }
        }
        write!(
            f,
            "  overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
