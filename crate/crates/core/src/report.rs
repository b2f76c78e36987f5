use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Witnesses kept per law; further violations are only counted.
const PER_LAW_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub law: String,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
    /// Number of violations per law, including those without a stored witness.
    pub counts: BTreeMap<String, usize>,
    /// Assumptions discharged rather than checked (e.g. finiteness).
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, law: &str, witness: &[usize]) {
        let c = self.counts.entry(law.to_string()).or_insert(0);
        *c += 1;
        if *c <= PER_LAW_LIMIT {
            self.failures.push(Failure {
                law: law.to_string(),
                witness: witness.to_vec(),
            });
        }
    }

    /// Records a violation when `holds` is false.
    pub fn check(&mut self, holds: bool, law: &str, witness: &[usize]) {
        if !holds {
            self.fail(law, witness);
        }
    }

    pub fn note(&mut self, note: &str) {
        if !self.notes.iter().any(|n| n == note) {
            self.notes.push(note.to_string());
        }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for f in other.failures {
            let kept = self.failures.iter().filter(|x| x.law == f.law).count();
            if kept < PER_LAW_LIMIT {
                self.failures.push(f);
            }
        }
        for (law, c) in other.counts {
            *self.counts.entry(law).or_insert(0) += c;
        }
        for n in other.notes {
            self.note(&n);
        }
    }

    pub fn has(&self, law: &str) -> bool {
        self.counts.contains_key(law)
    }

    pub fn laws(&self) -> Vec<&str> {
        self.counts.keys().map(String::as_str).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (law, c) in &self.counts {
            let w = self
                .failures
                .iter()
                .find(|x| &x.law == law)
                .map(|x| format!("{:?}", x.witness))
                .unwrap_or_default();
            writeln!(f, "{law}: {c} violation(s), e.g. {w}")?;
        }
        Ok(())
    }
}
