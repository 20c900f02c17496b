//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use daghilb::dagcat::{
    check_biproducts, check_equalizers, check_kernels, kernel, verify_scalar_field, FdObject,
};
use daghilb::l2equiv::verify_equivalence;
use daghilb::monoidal::{check_bullet_equals_circ, quaternionic_obstruction};
use daghilb::ortho::{check_ortholattice, check_orthomodular, check_phi};
use daghilb::report::Report;
use daghilb::sample::{random_quat, rng_for};
use daghilb::scalars::{check_promotion, check_ring_laws, promote_quaternionic, realify, StructureOps};
use daghilb::unidecomp::{check_decompositions, decompose, DecomposeOptions};
use daghilb::{FieldTag, Matrix, Quat, ToleranceProfile};

const SEED: u64 = 20_240_101;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { ok: true, detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what());
        }
    }

    fn report(&mut self, r: &Report) {
        let failures = r.failures.iter().take(2).map(|f| f.detail.clone()).collect::<Vec<_>>().join(" | ");
        self.require(r.pass(), || {
            format!(
                "{} {:?}: {}/{} failed, worst {:.3e}: {failures}",
                r.check, r.field, r.failed, r.trials, r.worst_residual
            )
        });
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.require(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:.0?}"));
    }
}

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn ring_suite() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for field in FieldTag::ALL {
        let r = check_ring_laws(field, 10_000, SEED, &tol());
        o.require(r.trials == 10_000, || format!("{field}: {} samples", r.trials));
        o.require(r.tolerance <= 1e-12, || format!("tolerance {}", r.tolerance));
        o.report(&r);
    }
    o.within(start.elapsed(), Duration::from_secs(5));
    o
}

fn biproduct_addition() -> Outcome {
    let mut o = Outcome::new();
    let dims: Vec<usize> = (0..=16).collect();
    for field in FieldTag::ALL {
        let r = check_biproducts(field, &dims, 1000, SEED, &tol());
        o.require(r.tolerance <= 1e-14, || format!("tolerance {}", r.tolerance));
        o.report(&r);
    }
    o
}

fn equalizers_and_kernels() -> Outcome {
    let mut o = Outcome::new();
    let dims: Vec<usize> = (0..=8).collect();
    for field in FieldTag::ALL {
        o.report(&check_equalizers(field, &dims, 1000, SEED, &tol()));
        o.report(&check_kernels(field, &dims, 1000, SEED, &tol()));
        o.report(&verify_scalar_field(field, 1000, SEED, &tol()));
        // the codiagonal K ⊕ K → K has a one-dimensional kernel spanned by (1, −1)
        let ker = kernel(&FdObject::generator(field).codiagonal(), &tol());
        o.require(ker.shape() == (2, 1), || format!("{field}: kernel shape {:?}", ker.shape()));
        if ker.shape() == (2, 1) {
            let ratio = ker.get(1, 0) * ker.get(0, 0).inv_unchecked();
            o.require(ratio.max_abs_diff(-Quat::ONE) <= 1e-12, || format!("{field}: ratio {ratio:?}"));
        }
    }
    o
}

fn ortholattice_suite() -> Outcome {
    let mut o = Outcome::new();
    for field in FieldTag::ALL {
        // 125 subobjects in each of the dimensions 1..=8
        for n in 1..=8 {
            let h = FdObject::new(field, n);
            let om = check_orthomodular(h, 125, SEED + n as u64, &tol());
            o.require(om.tolerance <= 1e-10, || format!("tolerance {}", om.tolerance));
            o.report(&om);
            o.report(&check_ortholattice(h, 125, SEED + n as u64, &tol()));
        }
    }
    o
}

fn phi_isomorphism() -> Outcome {
    let mut o = Outcome::new();
    for field in FieldTag::ALL {
        let mut disagreements = 0.0;
        for n in 1..=8 {
            let r = check_phi(FdObject::new(field, n), 125, SEED + n as u64, &tol());
            disagreements += r.metrics.get("disagreements").copied().unwrap_or(f64::NAN);
            o.report(&r);
        }
        o.require(disagreements == 0.0, || format!("{field}: {disagreements} disagreements"));
    }
    o
}

fn equivalence_suite() -> Outcome {
    let mut o = Outcome::new();
    let dims: Vec<usize> = (0..=8).collect();
    for field in FieldTag::ALL {
        let hundred = verify_equivalence(field, &dims, 100, SEED, &tol());
        let two_hundred = verify_equivalence(field, &dims, 200, SEED, &tol());
        for r in hundred.iter().filter(|r| r.check != "equivalence.full") {
            o.require(r.trials == 100, || format!("{}: {} trials", r.check, r.trials));
            o.report(r);
        }
        for r in two_hundred.iter().filter(|r| r.check == "equivalence.full") {
            o.require(r.trials == 200 && r.tolerance <= 1e-8, || format!("{}: {} trials", r.check, r.trials));
            o.report(r);
        }
    }
    o
}

fn unitary_decompositions() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let t = tol();

    // T = [0.3]: 0.3(0.5 + i√0.75) + 0.3(0.5 − i√0.75)
    let m = Matrix::scalar(daghilb::Scalar::real(FieldTag::C, 0.3));
    match decompose(&m, &t, DecomposeOptions::default()) {
        Ok(d) => {
            o.require(d.terms.len() == 2, || format!("[0.3]: {} terms", d.terms.len()));
            let s = 0.75f64.sqrt();
            let mut expected = vec![Quat::complex(0.15, 0.3 * s), Quat::complex(0.15, -0.3 * s)];
            for term in &d.terms {
                let product = term.coeff.value() * term.factor.get(0, 0);
                o.require((term.factor.get(0, 0).norm() - 1.0).abs() < 1e-12, || "factor off the unit circle".into());
                if let Some(k) = expected.iter().position(|e| e.max_abs_diff(product) <= 1e-12) {
                    expected.remove(k);
                } else {
                    o.require(false, || format!("[0.3]: unexpected term {product:?}"));
                }
            }
            o.require(d.residual(&m) <= 1e-12, || format!("[0.3]: residual {:e}", d.residual(&m)));
        }
        Err(e) => o.require(false, || format!("[0.3]: {e}")),
    }

    let complex_dims: Vec<usize> = (2..=12).collect();
    let even_dims: Vec<usize> = (2..=12).step_by(2).collect();
    for field in FieldTag::ALL {
        let dims = if field == FieldTag::C { &complex_dims } else { &even_dims };
        let r = check_decompositions(field, dims, 200, SEED, &t);
        o.require(r.trials == 200, || format!("{field}: {} instances", r.trials));
        let bound = if field == FieldTag::C { 4.0 } else { 5.0 };
        let terms = r.metrics.get("max_terms").copied().unwrap_or(f64::INFINITY);
        o.require(terms <= bound, || format!("{field}: {terms} terms"));
        let defect = r.metrics.get("max_factor_unitary_defect").copied().unwrap_or(f64::INFINITY);
        o.require(defect <= 1e-10, || format!("{field}: factor defect {defect:e}"));
        o.require(r.worst_residual <= 1e-8, || format!("{field}: residual {:e}", r.worst_residual));
        o.report(&r);
    }
    o.within(start.elapsed(), Duration::from_secs(60));
    o
}

fn promotion() -> Outcome {
    let mut o = Outcome::new();
    // ℝ⁴ ≅ ℍ in the coordinates (w, x, y, z): ⟨u, v⟩ = conj(v)·u
    let form = promote_quaternionic(
        Matrix::identity(FieldTag::R, 4),
        &StructureOps::right_multiplication_quaternionic(1),
        1e-12,
    );
    match form {
        Ok(form) => {
            let mut rng = rng_for("acceptance.promotion", SEED);
            let mut worst = 0.0f64;
            let mut worst_imag = 0.0f64;
            for _ in 0..1000 {
                let (p, q) = (random_quat(&mut rng, FieldTag::H), random_quat(&mut rng, FieldTag::H));
                let u = realify(&Matrix::column_vector(FieldTag::H, &[p]));
                let v = realify(&Matrix::column_vector(FieldTag::H, &[q]));
                let expected = q.conj() * p;
                match (form.inner(&u, &v), form.inner(&u, &u)) {
                    (Ok(uv), Ok(uu)) => {
                        worst = worst.max(uv.value().max_abs_diff(expected) / p.norm().max(1.0) / q.norm().max(1.0));
                        let im = uu.value();
                        worst_imag = worst_imag.max(im.x.abs().max(im.y.abs()).max(im.z.abs()) / p.norm_sqr().max(1.0));
                    }
                    (Err(e), _) | (_, Err(e)) => o.require(false, || e.to_string()),
                }
            }
            o.require(worst <= 1e-12, || format!("conj(v)·u mismatch {worst:e}"));
            o.require(worst_imag <= 1e-12, || format!("imaginary part of ⟨u,u⟩ {worst_imag:e}"));
        }
        Err(e) => o.require(false, || e.to_string()),
    }
    for field in [FieldTag::C, FieldTag::H] {
        o.report(&check_promotion(field, &[1, 2, 3, 4], 1000, SEED, &tol()));
    }
    o
}

fn scalar_multiplication() -> Outcome {
    let mut o = Outcome::new();
    let dims: Vec<usize> = (1..=6).collect();
    for field in [FieldTag::R, FieldTag::C] {
        let r = check_bullet_equals_circ(field, &dims, 1000, SEED, &tol());
        o.require(r.tolerance <= 1e-14, || format!("tolerance {}", r.tolerance));
        o.report(&r);
    }
    let q = quaternionic_obstruction(10, SEED);
    o.report(&q);
    o.require(Quat::I * Quat::J != Quat::J * Quat::I, || "ij = ji".into());
    o.require(q.metrics.get("ij_k") == Some(&1.0) && q.metrics.get("ji_k") == Some(&-1.0), || {
        format!("obstruction metrics {:?}", q.metrics)
    });
    o
}

fn cli_determinism() -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_daghilb"))
            .args(["audit", "--field", "all", "--dims", "1,2,3", "--trials", "20", "--seed", "11", "--json-only", "--out"])
            .arg(&path)
            .status()
            .expect("spawn daghilb");
        (status.code(), std::fs::read(&path).unwrap_or_default())
    };
    let (code_a, a) = run("a.json");
    let (code_b, b) = run("b.json");
    o.require(code_a == Some(0) && code_b == Some(0), || format!("exit codes {code_a:?}, {code_b:?}"));
    o.require(!a.is_empty() && a == b, || "reports differ".into());
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("division ring laws over R, C, H (1e4 samples per law, 1e-12, < 5 s)", ring_suite),
        ("biproduct addition equals entrywise sum and commutes with dagger (1e-14)", biproduct_addition),
        ("equalizers, kernels, factorizations (1e-8) and codiagonal kernel ratio -1 (1e-12)", equalizers_and_kernels),
        ("ortholattice laws (1e-8) and orthomodularity (1e-10), dims <= 8", ortholattice_suite),
        ("phi agrees with the projection oracle, zero disagreements", phi_isomorphism),
        ("faithful, essentially surjective, full via unitaries (1e-8)", equivalence_suite),
        ("unitary decompositions: C <= 4 terms, R/H <= 5 terms, dims 2-12, < 60 s", unitary_decompositions),
        ("promoted quaternionic inner product equals conj(v)u (1e-12)", promotion),
        ("scalar multiplication through the tensor equals composition; ij != ji", scalar_multiplication),
        ("CLI audit reports are byte-identical across runs", cli_determinism),
    ];
    let mut all = true;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        all &= outcome.ok;
        if outcome.ok {
            println!("PASS  {name}  [{elapsed:.2?}]");
        } else {
            println!("FAIL  {name}  [{elapsed:.2?}]: {}", outcome.detail);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
