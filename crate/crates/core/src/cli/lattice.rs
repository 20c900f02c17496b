use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ortho::{join, leq, meet, orthocomplement, Subobject, SubspaceJson};
use crate::scalars::FieldTag;
use crate::tolerance::ToleranceProfile;

pub const LATTICE_SCHEMA_VERSION: &str = "daghilb-lattice/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairEntry {
    pub left: usize,
    pub right: usize,
    pub rank: usize,
    pub subspace: SubspaceJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthomodularEntry {
    pub index: usize,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeReport {
    pub schema_version: String,
    pub field: Option<FieldTag>,
    pub ambient: Option<usize>,
    pub ranks: Vec<usize>,
    /// `leq[i][j]` iff subspace `i` lies in subspace `j`.
    pub leq: Vec<Vec<bool>>,
    pub meets: Vec<PairEntry>,
    pub joins: Vec<PairEntry>,
    pub complements: Vec<SubspaceJson>,
    /// `(i, j)` with subspace `j` the orthocomplement of subspace `i`, `i < j`.
    pub complement_pairs: Vec<(usize, usize)>,
    pub orthomodularity: Vec<OrthomodularEntry>,
    pub tolerance: f64,
    pub pass: bool,
}

impl LatticeReport {
    pub fn human_summary(&self) -> String {
        match (self.field, self.ambient) {
            (Some(f), Some(n)) => format!(
                "{}: {} subspaces of {f}^{n}, {} complement pairs, {} orthomodularity failures\n",
                if self.pass { "PASS" } else { "FAIL" },
                self.ranks.len(),
                self.complement_pairs.len(),
                self.orthomodularity.iter().filter(|e| !e.pass).count()
            ),
            _ => "PASS: empty lattice file\n".to_string(),
        }
    }
}

/// Parses a lattice file: empty (or whitespace only), or a JSON array of
/// subspaces sharing one ambient space.
pub fn parse_lattice(text: &str, tol: &ToleranceProfile) -> Result<Vec<Subobject>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let specs: Vec<SubspaceJson> = serde_json::from_str(text)?;
    if let Some(first) = specs.first() {
        if let Some(other) = specs.iter().find(|s| s.ambient != first.ambient || s.field != first.field) {
            return Err(Error::AmbientMismatch(format!(
                "{}^{} and {}^{} in one lattice file",
                first.field, first.ambient, other.field, other.ambient
            )));
        }
    }
    specs.iter().map(|s| s.to_subobject(tol)).collect()
}

pub fn lattice_report(subs: &[Subobject], tol: &ToleranceProfile) -> Result<LatticeReport> {
    let n = subs.len();
    let mut report = LatticeReport {
        schema_version: LATTICE_SCHEMA_VERSION.into(),
        field: subs.first().map(|s| s.ambient().field),
        ambient: subs.first().map(|s| s.ambient().dim),
        ranks: subs.iter().map(Subobject::rank).collect(),
        leq: Vec::with_capacity(n),
        meets: Vec::new(),
        joins: Vec::new(),
        complements: Vec::with_capacity(n),
        complement_pairs: Vec::new(),
        orthomodularity: Vec::with_capacity(n),
        tolerance: tol.residual,
        pass: true,
    };
    for f in subs {
        report.leq.push(subs.iter().map(|g| leq(f, g, tol)).collect::<Result<_>>()?);
    }
    let complements: Vec<Subobject> = subs.iter().map(|s| orthocomplement(s, tol)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let m = meet(&subs[i], &subs[j], tol)?;
            let jn = join(&subs[i], &subs[j], tol)?;
            report.meets.push(PairEntry { left: i, right: j, rank: m.rank(), subspace: SubspaceJson::from_subobject(&m) });
            report.joins.push(PairEntry { left: i, right: j, rank: jn.rank(), subspace: SubspaceJson::from_subobject(&jn) });
            if complements[i].same_as(&subs[j], tol.lattice_eq) {
                report.complement_pairs.push((i, j));
            }
        }
    }
    for (i, (s, c)) in subs.iter().zip(&complements).enumerate() {
        let dim = s.ambient().dim;
        let residual = (s.proj() + c.proj()).max_abs_diff(&Matrix::identity(s.ambient().field, dim));
        let pass = residual <= tol.residual;
        report.pass &= pass;
        report.orthomodularity.push(OrthomodularEntry { index: i, residual, pass });
        report.complements.push(SubspaceJson::from_subobject(c));
    }
    Ok(report)
}
