//! Objects, dagger biproducts, equalizers, kernels and image factorization.
//!
//! Objects are `𝕂ⁿ`; the zero object has dimension 0 and the simple
//! generator `K` dimension 1. Morphisms `C(K, K)` are the scalars.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complete_basis, nullspace, range_basis, Matrix, Morphism};
use crate::report::{run_trials, Report};
use crate::sample::{random_isometry, random_matrix, random_nonzero_scalar, random_scalar};
use crate::scalars::{FieldTag, Quat};
use crate::tolerance::ToleranceProfile;

/// A finite-dimensional object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FdObject {
    pub field: FieldTag,
    pub dim: usize,
}

impl FdObject {
    pub fn new(field: FieldTag, dim: usize) -> FdObject {
        FdObject { field, dim }
    }

    pub fn zero(field: FieldTag) -> FdObject {
        FdObject::new(field, 0)
    }

    pub fn generator(field: FieldTag) -> FdObject {
        FdObject::new(field, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn identity(&self) -> Morphism {
        Matrix::identity(self.field, self.dim)
    }

    /// Diagonal `Δ: A → A ⊕ A`.
    pub fn diagonal(&self) -> Morphism {
        self.identity().vstack(&self.identity()).expect("same field")
    }

    /// Codiagonal `∇: A ⊕ A → A`.
    pub fn codiagonal(&self) -> Morphism {
        self.identity().hstack(&self.identity()).expect("same field")
    }
}

/// `A ⊕ B` with projections `p, q` and injections `i = p†`, `j = q†`.
#[derive(Debug, Clone)]
pub struct Biproduct {
    pub total: FdObject,
    pub p: Morphism,
    pub q: Morphism,
    pub i: Morphism,
    pub j: Morphism,
}

impl Biproduct {
    /// Largest deviation from the biproduct identities. Exact (zero) for
    /// the block construction.
    pub fn invariant_defect(&self) -> f64 {
        let f = self.total.field;
        let (a, b) = (self.p.rows(), self.q.rows());
        [
            (&self.p * &self.p.dagger()).max_abs_diff(&Matrix::identity(f, a)),
            (&self.q * &self.q.dagger()).max_abs_diff(&Matrix::identity(f, b)),
            (&self.p * &self.q.dagger()).max_abs(),
            (&self.q * &self.p.dagger()).max_abs(),
            self.i.max_abs_diff(&self.p.dagger()),
            self.j.max_abs_diff(&self.q.dagger()),
            (&(&self.i * &self.p) + &(&self.j * &self.q))
                .max_abs_diff(&Matrix::identity(f, self.total.dim)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn biproduct(a: FdObject, b: FdObject) -> Result<Biproduct> {
    if a.field != b.field {
        return Err(Error::FieldMismatch { expected: a.field, found: b.field });
    }
    let f = a.field;
    let n = a.dim + b.dim;
    let p = Matrix::from_fn(f, a.dim, n, |r, c| if r == c { Quat::ONE } else { Quat::ZERO });
    let q = Matrix::from_fn(f, b.dim, n, |r, c| if r + a.dim == c { Quat::ONE } else { Quat::ZERO });
    Ok(Biproduct { total: FdObject::new(f, n), i: p.dagger(), j: q.dagger(), p, q })
}

/// `f ⊕ g` as a block-diagonal morphism.
pub fn direct_sum(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    f.direct_sum(g)
}

/// `f + g := ∇ ∘ (f ⊕ g) ∘ Δ`, computed literally.
pub fn add_via_biproduct(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch { expected: f.field(), found: g.field() });
    }
    if f.shape() != g.shape() {
        return Err(Error::Shape(format!(
            "f is {}x{} but g is {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let domain = FdObject::new(f.field(), f.cols());
    let codomain = FdObject::new(f.field(), f.rows());
    let sum = direct_sum(f, g)?;
    codomain.codiagonal().try_matmul(&sum)?.try_matmul(&domain.diagonal())
}

/// Dagger equalizer of a parallel pair: an isometry onto `ker(f − g)`.
pub fn equalizer(f: &Morphism, g: &Morphism, tol: &ToleranceProfile) -> Result<Morphism> {
    Ok(nullspace(&f.try_sub(g)?, tol.gs_drop))
}

/// Dagger kernel, `equalizer(f, 0)`.
pub fn kernel(f: &Morphism, tol: &ToleranceProfile) -> Morphism {
    nullspace(f, tol.gs_drop)
}

/// Cokernel pair `f₁, f₂: B ⇉ C` of `f: A → B`: the two injections of
/// `B ⊕ B` composed with the quotient by `{(fa, −fa)}`.
pub fn cokernel_pair(f: &Morphism, tol: &ToleranceProfile) -> Result<(Morphism, Morphism)> {
    let b = FdObject::new(f.field(), f.rows());
    let bp = biproduct(b, b)?;
    let relation = (&bp.i * f).try_sub(&(&bp.j * f))?;
    // quotient map: adjoint of an isometry onto the complement of the relations
    let quotient = kernel(&relation.dagger(), tol).dagger();
    Ok((&quotient * &bp.i, &quotient * &bp.j))
}

/// `f = m ∘ e` with `m` a dagger mono onto the image and `e` epi.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub epi: Morphism,
    pub mono: Morphism,
}

pub fn factorize(f: &Morphism, tol: &ToleranceProfile) -> Factorization {
    let mono = range_basis(f, tol.gs_drop);
    let epi = &mono.dagger() * f;
    Factorization { epi, mono }
}

/// Image through the route "dagger equalizer of the cokernel pair".
pub fn image_via_cokernel_pair(f: &Morphism, tol: &ToleranceProfile) -> Result<Morphism> {
    let (f1, f2) = cokernel_pair(f, tol)?;
    equalizer(&f1, &f2, tol)
}

pub fn is_dagger_mono(f: &Morphism, tol: f64) -> bool {
    f.isometry_defect() <= tol
}

pub fn is_dagger_epi(f: &Morphism, tol: f64) -> bool {
    f.coisometry_defect() <= tol
}

pub fn is_unitary(f: &Morphism, tol: f64) -> bool {
    is_dagger_mono(f, tol) && is_dagger_epi(f, tol)
}

/// Monic iff the kernel is zero.
pub fn is_mono(f: &Morphism, tol: &ToleranceProfile) -> bool {
    kernel(f, tol).cols() == 0
}

/// Epic iff the image spans the codomain.
pub fn is_epi(f: &Morphism, tol: &ToleranceProfile) -> bool {
    range_basis(f, tol.gs_drop).cols() == f.rows()
}

/// Division-ring checks on `C(K, K)`: nonzero scalars are invertible, the
/// kernel of `∇: K ⊕ K → K` exhibits `−1`, and `K` is simple.
pub fn verify_scalar_field(
    field: FieldTag,
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut inverses = Report::new(
        "scalar_field.invertibility",
        "nonzero endomorphisms of the generator are invertible",
        Some(field),
        tol.ring,
    );
    run_trials(&mut inverses, seed, trials, |rng| {
        let lambda = random_nonzero_scalar(rng, field);
        let inv = lambda.inv().map_err(|e| e.to_string())?;
        let one = Quat::ONE;
        Ok((lambda * inv).value().max_abs_diff(one).max((inv * lambda).value().max_abs_diff(one)))
    });

    let mut witness = Report::new(
        "scalar_field.additive_inverse",
        "kernel of the codiagonal on K ⊕ K is one-dimensional with ratio −1",
        Some(field),
        tol.ring,
    );
    let k = FdObject::generator(field);
    let ker = kernel(&k.codiagonal(), tol);
    if ker.cols() != 1 {
        witness.record_error(seed, format!("kernel of codiagonal has {} columns", ker.cols()));
    } else {
        let (a, b) = (ker.get(0, 0), ker.get(1, 0));
        if a.is_zero() || b.is_zero() {
            witness.record_error(seed, "kernel vector has a zero component".into());
        } else {
            let ratio = b * a.inv_unchecked();
            witness.metric("ratio_real", ratio.w);
            witness.metric("ratio_imag_norm", Quat::new(0.0, ratio.x, ratio.y, ratio.z).norm());
            witness.record(seed, ratio.max_abs_diff(-Quat::ONE), || format!("ratio {ratio:?}"));
        }
    }

    let mut simple = Report::new(
        "scalar_field.simplicity",
        "the generator has only the zero and full subobjects",
        Some(field),
        0.0,
    );
    run_trials(&mut simple, seed, trials, |rng| {
        // any endomorphism has image of dimension 0 or 1, and no family of
        // vectors in K spans more than one dimension
        let lambda = if rng.random_ratio(1, 8) {
            Matrix::zeros(field, 1, 1)
        } else {
            Matrix::scalar(random_scalar(rng, field))
        };
        let img = range_basis(&lambda, tol.gs_drop).cols();
        let expected = usize::from(!lambda.is_zero());
        let family = random_matrix(rng, field, 1, 3);
        let span = range_basis(&family, tol.gs_drop).cols();
        if img == expected && span <= 1 {
            Ok(0.0)
        } else {
            Err(format!("image dim {img} (expected {expected}), family span {span}"))
        }
    });

    let mut report = inverses.merge(witness).merge(simple);
    report.check = "G.simple_generator".into();
    report.statement_ref = "endomorphisms of a simple generator form an involutive division ring".into();
    report.tolerance = tol.ring;
    report
}

use rand::Rng;

/// Dagger axioms: involution, contravariance, identities.
pub fn check_dagger(field: FieldTag, dims: &[usize], trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new("D.dagger", "identity-on-objects contravariant involution", Some(field), tol.exact);
    run_trials(&mut r, seed, trials, |rng| {
        let (a, b, c) = pick3(rng, dims);
        let f = random_matrix(rng, field, b, a);
        let g = random_matrix(rng, field, c, b);
        let involution = f.dagger().dagger().max_abs_diff(&f);
        let contravariant = (&g * &f).dagger().max_abs_diff(&(&f.dagger() * &g.dagger()));
        let scale = 1.0f64.max(f.max_abs() * g.max_abs() * b as f64);
        Ok(involution.max(contravariant / scale / 8.0))
    });
    r
}

fn pick3<R: Rng>(rng: &mut R, dims: &[usize]) -> (usize, usize, usize) {
    let mut pick = || dims[rng.random_range(0..dims.len())];
    (pick(), pick(), pick())
}

/// Biproduct identities, `∇(f⊕g)Δ = f + g` and `(f+g)† = f† + g†`.
pub fn check_biproducts(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "B.biproducts",
        "dagger biproducts; induced addition commutes with the dagger",
        Some(field),
        tol.exact,
    );
    run_trials(&mut r, seed, trials, |rng| {
        let (a, b, _) = pick3(rng, dims);
        let bp = biproduct(FdObject::new(field, a), FdObject::new(field, b)).map_err(|e| e.to_string())?;
        let f = random_matrix(rng, field, b, a);
        let g = random_matrix(rng, field, b, a);
        let sum = add_via_biproduct(&f, &g).map_err(|e| e.to_string())?;
        let entrywise = &f + &g;
        let dagger_sum = add_via_biproduct(&f.dagger(), &g.dagger()).map_err(|e| e.to_string())?;
        let distributes = direct_sum(&f, &g).unwrap().dagger().max_abs_diff(&direct_sum(&f.dagger(), &g.dagger()).unwrap());
        let delta = FdObject::new(field, a);
        let codiag = delta.diagonal().dagger().max_abs_diff(&delta.codiagonal());
        Ok(bp
            .invariant_defect()
            .max(sum.max_abs_diff(&entrywise))
            .max(sum.dagger().max_abs_diff(&dagger_sum))
            .max(distributes)
            .max(codiag))
    });
    r
}

/// Universal property of dagger equalizers, and the image factorization.
pub fn check_equalizers(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "E.equalizers",
        "parallel pairs have dagger equalizers; morphisms factor as epi then dagger mono",
        Some(field),
        tol.reconstruct,
    );
    run_trials(&mut r, seed, trials, |rng| {
        let (a, b, _) = pick3(rng, dims);
        let f = random_matrix(rng, field, b, a);
        // g agrees with f on a random subspace
        let agree = rng.random_range(0..=a);
        let fixed = random_isometry(rng, field, a, agree);
        let off = &Matrix::identity(field, a) - &(&fixed * &fixed.dagger());
        let g = &f + &(&random_matrix(rng, field, b, a) * &off);
        let e = equalizer(&f, &g, tol).map_err(|e| e.to_string())?;
        let equalizes = (&f * &e).max_abs_diff(&(&g * &e));
        if equalizes > tol.residual {
            return Err(format!("f·e and g·e differ by {equalizes:e}"));
        }
        let mono = e.isometry_defect();
        // any h with fh = gh factors through e
        let h = &e * &random_matrix(rng, field, e.cols(), 3);
        let factored = (&e * &(&e.dagger() * &h)).max_abs_diff(&h);
        let fac = factorize(&f, tol);
        let rebuilt = (&fac.mono * &fac.epi).max_abs_diff(&f);
        let epi_ok = is_epi(&fac.epi, tol);
        if !epi_ok {
            return Err("factorization epi part is not surjective".into());
        }
        Ok(mono.max(factored).max(rebuilt))
    });
    r
}

/// Every dagger mono is the kernel of its complement's dagger.
pub fn check_kernels(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "K.kernels",
        "every dagger monomorphism is a dagger kernel",
        Some(field),
        tol.lattice_eq,
    );
    run_trials(&mut r, seed, trials, |rng| {
        let (n, _, _) = pick3(rng, dims);
        let k = rng.random_range(0..=n);
        let m = random_isometry(rng, field, n, k);
        let complement = complete_basis(&m).submatrix(0..n, k..n);
        let ker = kernel(&complement.dagger(), tol);
        if ker.cols() != k {
            return Err(format!("kernel has {} columns, expected {k}", ker.cols()));
        }
        let proj = &m * &m.dagger();
        let kproj = &ker * &ker.dagger();
        // mono iff zero kernel
        let mono_agrees = is_mono(&m, tol) && (k == n || !is_mono(&m.dagger(), tol) || k == 0);
        if !mono_agrees {
            return Err("monomorphism test disagrees with kernel test".into());
        }
        Ok(proj.max_abs_diff(&kproj))
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_for;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn biproduct_of_generators() {
        let k = FdObject::generator(FieldTag::R);
        let bp = biproduct(k, k).unwrap();
        assert_eq!(bp.total.dim, 2);
        assert_eq!(bp.p, Matrix::from_real_rows(FieldTag::R, &[&[1.0, 0.0]]));
        assert_eq!(bp.q, Matrix::from_real_rows(FieldTag::R, &[&[0.0, 1.0]]));
        assert_eq!(bp.invariant_defect(), 0.0);
    }

    #[test]
    fn biproduct_with_zero_object() {
        let a = FdObject::new(FieldTag::H, 3);
        let bp = biproduct(a, FdObject::zero(FieldTag::H)).unwrap();
        assert_eq!(bp.p, Matrix::identity(FieldTag::H, 3));
        assert_eq!(bp.q.shape(), (0, 3));
        assert_eq!(bp.invariant_defect(), 0.0);
        assert!(biproduct(a, FdObject::zero(FieldTag::R)).is_err());
    }

    #[test]
    fn biproduct_invariants_random() {
        let mut rng = rng_for("bp", 0);
        for _ in 0..10 {
            let (a, b) = (rng.random_range(0..6), rng.random_range(0..6));
            let bp = biproduct(FdObject::new(FieldTag::C, a), FdObject::new(FieldTag::C, b)).unwrap();
            assert_eq!(bp.invariant_defect(), 0.0);
        }
    }

    #[test]
    fn addition_examples() {
        let two = Matrix::from_real_rows(FieldTag::R, &[&[2.0]]);
        let three = Matrix::from_real_rows(FieldTag::R, &[&[3.0]]);
        assert_eq!(add_via_biproduct(&two, &three).unwrap().get(0, 0), Quat::real(5.0));
        let mut rng = rng_for("add", 0);
        let f = random_matrix(&mut rng, FieldTag::H, 4, 3);
        let zero = Matrix::zeros(FieldTag::H, 4, 3);
        assert_eq!(add_via_biproduct(&f, &zero).unwrap(), f);
        let g = random_matrix(&mut rng, FieldTag::H, 4, 3);
        assert!(add_via_biproduct(&f, &g).unwrap().max_abs_diff(&(&f + &g)) <= 1e-14);
        assert!(add_via_biproduct(&f, &Matrix::zeros(FieldTag::H, 3, 3)).is_err());
    }

    #[test]
    fn equalizer_examples() {
        let f = Matrix::identity(FieldTag::R, 2);
        let g = Matrix::from_real_rows(FieldTag::R, &[&[1.0, 0.0], &[0.0, 0.0]]);
        let e = equalizer(&f, &g, &tol()).unwrap();
        assert_eq!(e.cols(), 1);
        assert!((e.get(0, 0).w.abs() - 1.0).abs() < 1e-15 && e.get(1, 0).w.abs() < 1e-15);

        let e = equalizer(&f, &f, &tol()).unwrap();
        assert_eq!(e.cols(), 2);
        assert!(e.unitary_defect() < 1e-15);

        let one = Matrix::from_real_rows(FieldTag::R, &[&[1.0]]);
        let two = Matrix::from_real_rows(FieldTag::R, &[&[2.0]]);
        assert_eq!(equalizer(&one, &two, &tol()).unwrap().cols(), 0);
    }

    #[test]
    fn factorization_examples() {
        let ones = Matrix::from_real_rows(FieldTag::R, &[&[1.0, 1.0], &[1.0, 1.0]]);
        let fac = factorize(&ones, &tol());
        let s = std::f64::consts::SQRT_2;
        let sign = fac.mono.get(0, 0).w.signum();
        assert!((fac.mono.get(0, 0).w * sign - 1.0 / s).abs() < 1e-15);
        assert!((fac.mono.get(1, 0).w * sign - 1.0 / s).abs() < 1e-15);
        assert!((fac.epi.get(0, 0).w * sign - s).abs() < 1e-14);
        assert!((fac.epi.get(0, 1).w * sign - s).abs() < 1e-14);
        assert!((&fac.mono * &fac.epi).max_abs_diff(&ones) < 1e-10);

        let id = Matrix::identity(FieldTag::C, 3);
        let fac = factorize(&id, &tol());
        assert!(fac.mono.unitary_defect() < 1e-14 && fac.epi.unitary_defect() < 1e-14);
    }

    #[test]
    fn cokernel_pair_route_matches_range() {
        let mut rng = rng_for("coker", 0);
        for field in FieldTag::ALL {
            let f = &random_matrix(&mut rng, field, 5, 2) * &random_matrix(&mut rng, field, 2, 4);
            let via = image_via_cokernel_pair(&f, &tol()).unwrap();
            let direct = factorize(&f, &tol()).mono;
            assert_eq!(via.cols(), 2);
            assert!((&via * &via.dagger()).max_abs_diff(&(&direct * &direct.dagger())) < 1e-8);
        }
    }

    #[test]
    fn kernel_of_codiagonal() {
        let k = FdObject::generator(FieldTag::R);
        let ker = kernel(&k.codiagonal(), &tol());
        assert_eq!(ker.cols(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((ker.get(0, 0).w.abs() - s).abs() < 1e-15);
        assert!((ker.get(0, 0).w + ker.get(1, 0).w).abs() < 1e-15);
    }

    #[test]
    fn mono_epi_predicates() {
        let col = Matrix::from_real_rows(FieldTag::R, &[&[0.6], &[0.8]]);
        assert!(is_dagger_mono(&col, 1e-12));
        let row = Matrix::from_real_rows(FieldTag::R, &[&[1.0, 1.0]]);
        assert!(is_epi(&row, &tol()));
        assert!(!is_mono(&row, &tol()));
        assert!(is_unitary(&Matrix::identity(FieldTag::H, 3), 1e-15));
        assert!(!is_dagger_epi(&col, 1e-12));
    }

    #[test]
    fn scalar_field_reports() {
        for field in FieldTag::ALL {
            let r = verify_scalar_field(field, 200, 7, &tol());
            assert!(r.pass(), "{field}: {:?}", r.failures);
            assert!((r.metrics["ratio_real"] + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn category_checks_pass() {
        let dims = [0, 1, 2, 3, 5];
        for field in FieldTag::ALL {
            for r in [
                check_dagger(field, &dims, 30, 1, &tol()),
                check_biproducts(field, &dims, 30, 1, &tol()),
                check_equalizers(field, &dims, 30, 1, &tol()),
                check_kernels(field, &dims, 30, 1, &tol()),
            ] {
                assert!(r.pass(), "{} {field}: {:?}", r.check, r.failures);
            }
        }
    }
}
