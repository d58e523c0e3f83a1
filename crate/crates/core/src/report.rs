//! Pass/fail reports shared by every checker.

use std::fmt;

use serde::Serialize;

/// Outcome of checking one law over a family of instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub cases: usize,
    /// First failing instance, if any.
    pub counterexample: Option<String>,
}

impl LawOutcome {
    pub fn new(law: impl Into<String>) -> Self {
        LawOutcome {
            law: law.into(),
            cases: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub laws: Vec<LawOutcome>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport {
            subject: subject.into(),
            laws: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawOutcome::passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawOutcome> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn first_failure(&self) -> Option<&LawOutcome> {
        self.laws.iter().find(|l| !l.passed())
    }

    /// Starts tracking a law; cases and the first failure are recorded
    /// through the returned handle.
    pub fn track(&mut self, law: &str) -> &mut LawOutcome {
        self.laws.push(LawOutcome::new(law));
        self.laws.last_mut().unwrap()
    }

    pub fn merge(&mut self, other: CheckReport) {
        for mut law in other.laws {
            law.law = format!("{}: {}", other.subject, law.law);
            self.laws.push(law);
        }
    }
}

impl LawOutcome {
    /// Records one instance. Only the first failure is kept.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.subject,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for law in &self.laws {
            match &law.counterexample {
                None => writeln!(f, "  ok   {} ({} cases)", law.law, law.cases)?,
                Some(w) => writeln!(f, "  FAIL {} ({} cases): {}", law.law, law.cases, w)?,
            }
        }
        Ok(())
    }
}
