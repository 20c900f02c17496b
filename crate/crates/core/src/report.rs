//! Pass/fail records for randomized checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::sample::{rng_from_seed, trial_seed, Rng64};
use crate::scalars::FieldTag;

/// Failures kept verbatim per report; the count is always exact.
pub const MAX_RECORDED_FAILURES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed: u64,
    pub detail: String,
}

/// Outcome of one check over a batch of seeded trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub statement_ref: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldTag>,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub tolerance: f64,
    pub worst_residual: f64,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: &str, statement_ref: &str, field: Option<FieldTag>, tolerance: f64) -> Report {
        Report {
            check: check.to_string(),
            statement_ref: statement_ref.to_string(),
            field,
            trials: 0,
            passed: 0,
            failed: 0,
            tolerance,
            worst_residual: 0.0,
            failures: Vec::new(),
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }

    /// Records a residual; NaN counts as a failure.
    pub fn record(&mut self, seed: u64, residual: f64, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if (residual.is_nan() || residual > self.worst_residual)
            && !self.worst_residual.is_nan() {
                self.worst_residual = residual;
            }
        if residual <= self.tolerance {
            self.passed += 1;
        } else {
            self.fail_inner(seed, format!("residual {residual:e} > {:e}: {}", self.tolerance, detail()));
        }
    }

    pub fn record_bool(&mut self, seed: u64, ok: bool, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else {
            self.fail_inner(seed, detail());
        }
    }

    pub fn record_error(&mut self, seed: u64, detail: String) {
        self.trials += 1;
        self.fail_inner(seed, detail);
    }

    fn fail_inner(&mut self, seed: u64, detail: String) {
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(Failure { seed, detail });
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    /// Combines two batches of the same check.
    pub fn merge(mut self, other: Report) -> Report {
        self.trials += other.trials;
        self.passed += other.passed;
        self.failed += other.failed;
        self.worst_residual = if self.worst_residual.is_nan() || other.worst_residual.is_nan() {
            f64::NAN
        } else {
            self.worst_residual.max(other.worst_residual)
        };
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
        for (k, v) in other.metrics {
            self.metrics.entry(k).or_insert(v);
        }
        self.notes.extend(other.notes);
        self
    }
}

/// Runs `trials` seeded trials. The closure returns a residual compared
/// against the report tolerance, or an error description.
pub fn run_trials(
    report: &mut Report,
    seed: u64,
    trials: u64,
    mut trial: impl FnMut(&mut Rng64) -> Result<f64, String>,
) {
    let field = report.field.unwrap_or(FieldTag::R);
    for t in 0..trials {
        let s = trial_seed(&report.check, seed, field, t);
        let mut rng = rng_from_seed(s);
        match trial(&mut rng) {
            Ok(residual) => report.record(s, residual, String::new),
            Err(detail) => report.record_error(s, detail),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_and_threshold_handling() {
        let mut r = Report::new("x", "y", None, 1e-3);
        r.record(1, 1e-4, String::new);
        r.record(2, f64::NAN, || "nan".into());
        r.record(3, 1.0, || "big".into());
        assert_eq!((r.trials, r.passed, r.failed), (3, 1, 2));
        assert!(r.worst_residual.is_nan());
        assert_eq!(r.failures[0].seed, 2);
    }

    #[test]
    fn merge_is_associative_on_counts() {
        let mk = |n: u64, bad: bool| {
            let mut r = Report::new("c", "s", None, 1.0);
            for i in 0..n {
                r.record(i, if bad { 2.0 } else { 0.5 }, String::new);
            }
            r
        };
        let a = mk(2, false).merge(mk(3, true)).merge(mk(1, false));
        let b = mk(2, false).merge(mk(3, true).merge(mk(1, false)));
        assert_eq!(a, b);
        assert_eq!(a.failed, 3);
    }

    #[test]
    fn trials_are_reproducible() {
        use rand::Rng;
        let mut draws = Vec::new();
        for _ in 0..2 {
            let mut r = Report::new("repro", "s", Some(FieldTag::C), 1.0);
            let mut seen = Vec::new();
            run_trials(&mut r, 9, 4, |rng| {
                seen.push(rng.random::<u64>());
                Ok(0.0)
            });
            draws.push(seen);
        }
        assert_eq!(draws[0], draws[1]);
    }
}
