use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dagcat::{check_biproducts, check_dagger, check_equalizers, check_kernels, verify_scalar_field, FdObject};
use crate::error::{Error, Result};
use crate::l2equiv::{check_directed_colimits, verify_equivalence};
use crate::monoidal::{check_bullet_equals_circ, check_coherence, quaternionic_obstruction};
use crate::ortho::{check_completeness_proxy, check_ortholattice, check_orthomodular, check_phi};
use crate::report::Report;
use crate::scalars::{check_promotion, check_ring_laws, FieldTag};
use crate::tolerance::ToleranceProfile;
use crate::unidecomp::check_decompositions;

pub const AUDIT_SCHEMA_VERSION: &str = "daghilb-audit/1";

/// Largest dimension accepted on the command line.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub fields: Vec<FieldTag>,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tolerances: ToleranceProfile,
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.fields.is_empty() {
            return Err(Error::Config("no field selected".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::Config("no dimension given".into()));
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d > MAX_DIM) {
            return Err(Error::Config(format!("dimension {d} exceeds {MAX_DIM}")));
        }
        Ok(())
    }
}

/// `"all"`, or a comma list of `r`, `c`, `h`. Sorted, no duplicates.
pub fn parse_fields(text: &str) -> Result<Vec<FieldTag>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if part.eq_ignore_ascii_case("all") {
            out.extend(FieldTag::ALL);
            continue;
        }
        out.push(FieldTag::parse(part).ok_or_else(|| Error::Config(format!("unknown field {part:?}")))?);
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Config("no field selected".into()));
    }
    Ok(out)
}

/// Comma-separated nonnegative dimensions, kept in the given order.
pub fn parse_dims(text: &str) -> Result<Vec<usize>> {
    let mut dims = Vec::new();
    for part in text.split(',').map(str::trim) {
        let d: usize = part.parse().map_err(|_| Error::Config(format!("bad dimension {part:?}")))?;
        if d > MAX_DIM {
            return Err(Error::Config(format!("dimension {d} exceeds {MAX_DIM}")));
        }
        dims.push(d);
    }
    Ok(dims)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub statement_ref: String,
    pub passed: bool,
    pub results: Vec<Report>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub sections: usize,
    pub reports: usize,
    pub trials: u64,
    pub failed_trials: u64,
    pub failed_sections: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub schema_version: String,
    pub config: AuditConfig,
    pub sections: BTreeMap<String, Section>,
    pub summary: Summary,
    pub open_questions: Vec<String>,
}

impl AuditReport {
    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    /// One line per section.
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        for (key, s) in &self.sections {
            let trials: u64 = s.results.iter().map(|r| r.trials).sum();
            let failed: u64 = s.results.iter().map(|r| r.failed).sum();
            let worst = s.results.iter().map(|r| r.worst_residual).fold(0.0, f64::max);
            out.push_str(&format!(
                "{} {key}: {}/{} trials passed, worst residual {worst:.3e}\n",
                if s.passed { "PASS" } else { "FAIL" },
                trials - failed,
                trials
            ));
        }
        out.push_str(&format!(
            "{}: {} sections, {} failed\n",
            if self.pass() { "PASS" } else { "FAIL" },
            self.summary.sections,
            self.summary.failed_sections.len()
        ));
        out
    }
}

/// Runs `check` once per dimension and merges, tagging failures with the
/// dimension they came from.
fn per_dim(dims: &[usize], mut check: impl FnMut(usize, u64) -> Report, seed: u64) -> Report {
    let mut merged: Option<Report> = None;
    for &d in dims {
        let mut r = check(d, seed ^ (d as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for f in &mut r.failures {
            f.detail = format!("dim {d}: {}", f.detail);
        }
        merged = Some(match merged {
            None => r,
            Some(m) => m.merge(r),
        });
    }
    merged.expect("dims is nonempty")
}

pub fn run_audit(config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    let (dims, trials, seed, tol) = (&config.dims[..], config.trials, config.seed, &config.tolerances);
    let mut reports: Vec<Report> = Vec::new();
    for &field in &config.fields {
        reports.push(check_ring_laws(field, trials, seed, tol));
        reports.push(check_dagger(field, dims, trials, seed, tol));
        reports.push(verify_scalar_field(field, trials, seed, tol));
        reports.push(check_biproducts(field, dims, trials, seed, tol));
        reports.push(check_equalizers(field, dims, trials, seed, tol));
        reports.push(check_kernels(field, dims, trials, seed, tol));
        reports.push(check_directed_colimits(field, dims, trials, seed, tol));
        let obj = |d| FdObject::new(field, d);
        reports.push(per_dim(dims, |d, s| check_ortholattice(obj(d), trials, s, tol), seed));
        reports.push(per_dim(dims, |d, s| check_orthomodular(obj(d), trials, s, tol), seed));
        reports.push(per_dim(dims, |d, s| check_phi(obj(d), trials, s, tol), seed));
        reports.push(per_dim(dims, |d, s| check_completeness_proxy(obj(d), trials, s, tol), seed));
        reports.extend(verify_equivalence(field, dims, trials, seed, tol));
        if field.is_commutative() {
            reports.push(check_coherence(field, dims, trials, seed, tol));
            reports.push(check_bullet_equals_circ(field, dims, trials, seed, tol));
        } else {
            reports.push(quaternionic_obstruction(trials, seed));
            reports.push(check_promotion(field, dims, trials, seed, tol));
        }
        if field == FieldTag::C {
            reports.push(check_promotion(field, dims, trials, seed, tol));
        }
        reports.push(check_decompositions(field, dims, trials, seed, tol));
    }
    Ok(assemble(config.clone(), reports))
}

fn assemble(config: AuditConfig, reports: Vec<Report>) -> AuditReport {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    for r in reports {
        let s = sections.entry(r.check.clone()).or_insert_with(|| Section {
            statement_ref: r.statement_ref.clone(),
            passed: true,
            results: Vec::new(),
        });
        s.passed &= r.pass();
        s.results.push(r);
    }
    for s in sections.values_mut() {
        s.results.sort_by_key(|r| r.field);
    }
    let failed_sections: Vec<String> =
        sections.iter().filter(|(_, s)| !s.passed).map(|(k, _)| k.clone()).collect();
    let all = sections.values().flat_map(|s| &s.results);
    let summary = Summary {
        sections: sections.len(),
        reports: all.clone().count(),
        trials: all.clone().map(|r| r.trials).sum(),
        failed_trials: all.map(|r| r.failed).sum(),
        pass: failed_sections.is_empty(),
        failed_sections,
    };
    AuditReport {
        schema_version: AUDIT_SCHEMA_VERSION.into(),
        config,
        sections,
        summary,
        open_questions: vec![
            "generator versus dagger generator: only dagger-mono separators are exercised".into(),
            "completeness of the subobject lattice is checked on finite chains only".into(),
            "the five-term bound over ℝ and ℍ is not claimed to be minimal".into(),
            "the monoidal generator property is sampled, not decided".into(),
        ],
    }
}
