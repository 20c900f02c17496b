use serde::{Deserialize, Serialize};

use crate::dagcat::kernel;
use crate::error::{Error, Result};
use crate::linalg::{eigh, Matrix};
use crate::report::{run_trials, Report};
use crate::sample::random_matrix;
use crate::scalars::FieldTag;
use crate::tolerance::ToleranceProfile;
use rand::Rng;

pub const SOLER_SCHEMA_VERSION: &str = "daghilb-soler/1";

fn default_trials() -> u64 {
    100
}

/// A finite Hermitian space `(𝕂ⁿ, ⟨u,v⟩ = v†Gu)`; `gram` defaults to `I`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolerInstance {
    pub field: FieldTag,
    pub dim: usize,
    #[serde(default)]
    pub gram: Option<Matrix>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl SolerInstance {
    pub fn gram(&self) -> Result<Matrix> {
        match &self.gram {
            None => Ok(Matrix::identity(self.field, self.dim)),
            Some(g) => {
                if g.shape() != (self.dim, self.dim) {
                    return Err(Error::Shape(format!(
                        "gram is {}x{}, instance dimension is {}",
                        g.rows(),
                        g.cols(),
                        self.dim
                    )));
                }
                g.promote(self.field)
            }
        }
    }
}

pub fn parse_instance(text: &str) -> Result<SolerInstance> {
    let inst: SolerInstance = serde_json::from_str(text)?;
    if inst.dim > super::audit::MAX_DIM {
        return Err(Error::Config(format!("dimension {} exceeds {}", inst.dim, super::audit::MAX_DIM)));
    }
    if inst.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    inst.gram()?;
    Ok(inst)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hypothesis {
    pub status: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolerReport {
    pub schema_version: String,
    pub field: FieldTag,
    pub dim: usize,
    pub hermitian_form: Report,
    pub orthomodular: Report,
    pub orthonormal_sequence: Hypothesis,
    pub pass: bool,
}

impl SolerReport {
    pub fn human_summary(&self) -> String {
        let line = |r: &Report| if r.pass() { "pass" } else { "fail" };
        format!(
            "{}: {}^{}: hermitian form {}, orthomodular {}, orthonormal sequence {}\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.field,
            self.dim,
            line(&self.hermitian_form),
            line(&self.orthomodular),
            self.orthonormal_sequence.status
        )
    }
}

/// Checks what a finite instance can witness of the hypotheses: a
/// Hermitian (conjugate-symmetric, anisotropic) form, and orthomodularity
/// `H = F ⊕ F⊥` for sampled subspaces with a symmetric orthogonality.
pub fn soler_report(inst: &SolerInstance, tol: &ToleranceProfile) -> Result<SolerReport> {
    let raw = inst.gram()?;
    let (field, n) = (inst.field, inst.dim);
    // positivity and orthogonality are invariant under positive rescaling
    let size = raw.max_abs();
    let gram = if size > 0.0 && size.is_finite() { raw.scale(1.0 / size) } else { raw };

    let mut form = Report::new("soler.hermitian_form", "the form is Hermitian and anisotropic", Some(field), tol.residual);
    let defect = gram.self_adjoint_defect();
    form.metric("self_adjoint_defect", defect);
    form.record(inst.seed, defect, || "form is not conjugate-symmetric".into());
    if defect <= tol.residual && n > 0 {
        let spectrum = eigh(&gram)?;
        let lowest = spectrum.values[0];
        form.metric("min_eigenvalue", lowest);
        form.record_bool(inst.seed, lowest > tol.psd, || {
            format!("form is not positive definite (eigenvalue {lowest:e}), so some vector is isotropic")
        });
    }

    let mut om = Report::new(
        "soler.orthomodular",
        "every subspace F satisfies H = F ⊕ F⊥ and orthogonality is symmetric",
        Some(field),
        tol.residual,
    );
    run_trials(&mut om, inst.seed, inst.trials, |rng| {
        if n == 0 {
            return Ok(0.0);
        }
        let k = rng.random_range(0..=n);
        let f = random_matrix(rng, field, n, k);
        // F⊥ = {x : ⟨x, f⟩ = f†Gx = 0 for f ∈ F}
        let perp = kernel(&(&f.dagger() * &gram), tol);
        let both = f.hstack(&perp).map_err(|e| e.to_string())?;
        let rank = crate::linalg::range_basis(&both, tol.gs_drop).cols();
        if rank != n {
            return Err(format!("F + F⊥ has dimension {rank}, expected {n}"));
        }
        // symmetry: ⟨f, x⟩ = x†Gf must vanish too
        let scale = f.max_abs().max(1.0);
        Ok((&perp.dagger() * &(&gram * &f)).max_abs() / scale)
    });
    if n == 0 {
        om.note("zero-dimensional instance: vacuously orthomodular");
    }

    let orthonormal_sequence = Hypothesis {
        status: "not testable — finite model".into(),
        detail: "an infinite orthonormal sequence has no finite-dimensional witness".into(),
    };
    let pass = form.pass() && om.pass();
    Ok(SolerReport {
        schema_version: SOLER_SCHEMA_VERSION.into(),
        field,
        dim: n,
        hermitian_form: form,
        orthomodular: om,
        orthonormal_sequence,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn quaternionic_four() {
        let inst = parse_instance(r#"{"field":"H","dim":4,"trials":50,"seed":1}"#).unwrap();
        let r = soler_report(&inst, &tol()).unwrap();
        assert!(r.pass, "{:?} {:?}", r.hermitian_form.failures, r.orthomodular.failures);
        assert_eq!(r.orthonormal_sequence.status, "not testable — finite model");
    }

    #[test]
    fn zero_dimensional_is_vacuous() {
        let r = soler_report(&parse_instance(r#"{"field":"R","dim":0}"#).unwrap(), &tol()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn corrupted_form_fails() {
        let text = r#"{"field":"R","dim":2,"trials":20,
            "gram":{"field":"R","rows":2,"cols":2,"data":[[[1.0],[0.7]],[[0.0],[1.0]]]}}"#;
        let r = soler_report(&parse_instance(text).unwrap(), &tol()).unwrap();
        assert!(!r.orthomodular.pass());
        assert!(!r.hermitian_form.pass());
        assert!(!r.pass);
    }

    #[test]
    fn bad_instances() {
        assert!(parse_instance(r#"{"field":"R","dim":2,"trials":0}"#).is_err());
        assert!(parse_instance(r#"{"field":"R","dim":3,"gram":{"field":"R","rows":1,"cols":1,"data":[[[1.0]]]}}"#).is_err());
        assert!(parse_instance(r#"{"field":"R","dim":2,"extra":1}"#).is_err());
    }
}
