//! Entry points shared by the fuzz targets and the corpus replay test.
//! Each takes raw bytes and must return without panicking.

use crate::cli::{audit, lattice, soler, Cli};
use crate::l2equiv::parse_diagram;
use crate::linalg::parse_matrix;
use crate::ortho::parse_subspace;
use crate::tolerance::ToleranceProfile;
use crate::unidecomp::{decompose, DecomposeOptions};
use clap::Parser;

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

pub fn matrix(data: &[u8]) {
    let Some(t) = text(data) else { return };
    if let Ok(m) = parse_matrix(t) {
        let _ = serde_json::to_string(&m);
        let _ = m.dagger();
        if m.is_square() && m.rows() <= 8 {
            let _ = decompose(&m, &ToleranceProfile::default(), DecomposeOptions { pad: true });
        }
    }
}

pub fn subspace(data: &[u8]) {
    let Some(t) = text(data) else { return };
    let tol = ToleranceProfile::default();
    if let Ok(s) = parse_subspace(t, &tol) {
        let c = crate::ortho::orthocomplement(&s, &tol);
        let _ = crate::ortho::join(&s, &c, &tol);
    }
}

pub fn lattice(data: &[u8]) {
    let Some(t) = text(data) else { return };
    let tol = ToleranceProfile::default();
    if let Ok(subs) = lattice::parse_lattice(t, &tol) {
        if subs.len() <= 16 {
            let _ = lattice::lattice_report(&subs, &tol);
        }
    }
}

pub fn diagram(data: &[u8]) {
    let Some(t) = text(data) else { return };
    if let Ok(d) = parse_diagram(t) {
        if d.nodes().count() <= 32 {
            let _ = d.colimit(&ToleranceProfile::default());
        }
    }
}

pub fn instance(data: &[u8]) {
    let Some(t) = text(data) else { return };
    if let Ok(mut inst) = soler::parse_instance(t) {
        inst.trials = inst.trials.min(4);
        if inst.dim <= 16 {
            let _ = soler::soler_report(&inst, &ToleranceProfile::default());
        }
    }
}

/// Audit configuration as JSON, and command lines split on whitespace.
/// Commands are parsed, never run.
pub fn config(data: &[u8]) {
    let Some(t) = text(data) else { return };
    if let Ok(c) = serde_json::from_str::<audit::AuditConfig>(t) {
        let _ = c.validate();
    }
    let _ = audit::parse_fields(t);
    let _ = audit::parse_dims(t);
    let _ = ToleranceProfile::default().with_overrides(t);
    let _ = Cli::try_parse_from(std::iter::once("daghilb").chain(t.split_whitespace()));
}
