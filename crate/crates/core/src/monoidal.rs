//! Tensor product of real and complex Hilbert spaces, its coherence
//! witnesses, and why ℍ admits no such structure.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Morphism};
use crate::report::{run_trials, Report};
use crate::sample::{random_matrix, random_quat, random_scalar};
use crate::scalars::{FieldTag, Quat};
use crate::tolerance::ToleranceProfile;

fn check_commutative(field: FieldTag) -> Result<()> {
    if field.is_commutative() {
        Ok(())
    } else {
        Err(Error::Unsupported {
            field,
            reason: "no dagger monoidal tensor: its scalars would have to commute, but ij = k and ji = -k".into(),
        })
    }
}

/// Kronecker product `f ⊗ g`.
pub fn tensor(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch { expected: f.field(), found: g.field() });
    }
    check_commutative(f.field())?;
    let (gr, gc) = g.shape();
    Ok(Matrix::from_fn(f.field(), f.rows() * gr, f.cols() * gc, |i, j| {
        f.get(i / gr.max(1), j / gc.max(1)) * g.get(i % gr.max(1), j % gc.max(1))
    }))
}

/// Structure maps of `(Hilb_𝕂, ⊗, K)`, given as permutations between
/// flattened index sets.
#[derive(Debug, Clone, Copy)]
pub struct TensorStructure {
    field: FieldTag,
}

/// Permutation matrix sending basis index `src` to `dest(src)`.
fn permutation(field: FieldTag, n: usize, dest: impl Fn(usize) -> usize) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for s in 0..n {
        m.set(dest(s), s, Quat::ONE);
    }
    m
}

impl TensorStructure {
    pub fn new(field: FieldTag) -> Result<TensorStructure> {
        check_commutative(field)?;
        Ok(TensorStructure { field })
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn unit_dim(&self) -> usize {
        1
    }

    /// `α: (A⊗B)⊗C → A⊗(B⊗C)`, re-bracketing the index `((a,b),c)`.
    pub fn associator(&self, a: usize, b: usize, c: usize) -> Morphism {
        permutation(self.field, a * b * c, |s| {
            let (ab, z) = (s / c.max(1), s % c.max(1));
            let (x, y) = (ab / b.max(1), ab % b.max(1));
            x * (b * c) + (y * c + z)
        })
    }

    /// `λ: K⊗A → A`.
    pub fn left_unitor(&self, a: usize) -> Morphism {
        permutation(self.field, a, |s| s)
    }

    /// `ρ: A⊗K → A`.
    pub fn right_unitor(&self, a: usize) -> Morphism {
        permutation(self.field, a, |s| s)
    }

    /// `σ: A⊗B → B⊗A`.
    pub fn symmetry(&self, a: usize, b: usize) -> Morphism {
        permutation(self.field, a * b, |s| {
            let (x, y) = (s / b.max(1), s % b.max(1));
            y * a + x
        })
    }

    fn id(&self, n: usize) -> Morphism {
        Matrix::identity(self.field, n)
    }

    /// Both routes `((A⊗B)⊗C)⊗D → A⊗(B⊗(C⊗D))`.
    pub fn pentagon_defect(&self, a: usize, b: usize, c: usize, d: usize) -> Result<f64> {
        let upper = &self.associator(a, b, c * d) * &self.associator(a * b, c, d);
        let lower = &(&tensor(&self.id(a), &self.associator(b, c, d))? * &self.associator(a, b * c, d))
            * &tensor(&self.associator(a, b, c), &self.id(d))?;
        Ok(upper.max_abs_diff(&lower))
    }

    /// `(1_A ⊗ λ_B) α = ρ_A ⊗ 1_B` on `(A⊗K)⊗B`.
    pub fn triangle_defect(&self, a: usize, b: usize) -> Result<f64> {
        let lhs = &tensor(&self.id(a), &self.left_unitor(b))? * &self.associator(a, 1, b);
        let rhs = tensor(&self.right_unitor(a), &self.id(b))?;
        Ok(lhs.max_abs_diff(&rhs))
    }

    /// `f • λ = ρ_A (f ⊗ λ) ρ_K⁻¹` for `f: K → A` and `λ: K → K`.
    pub fn bullet(&self, f: &Morphism, lambda: &Morphism) -> Result<Morphism> {
        let fl = tensor(f, lambda)?;
        Ok(&(&self.right_unitor(f.rows()) * &fl) * &self.right_unitor(1).dagger())
    }
}

/// Coherence, naturality, dagger and bifunctoriality laws on sampled
/// morphisms, plus the comparison-map and monoidal-generator proxies.
pub fn check_coherence(field: FieldTag, dims: &[usize], trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new(
        "monoidal.coherence",
        "⊗ is a dagger functor with unitary, coherent associator and unitors",
        Some(field),
        tol.exact,
    );
    r.note("proxy: structure maps are the canonical permutation-reshape maps; uniqueness is not formalized");
    r.note("monoidal generator property is sampled on product vectors, not decided");
    let ts = match TensorStructure::new(field) {
        Ok(ts) => ts,
        Err(e) => {
            r.record_error(seed, e.to_string());
            return r;
        }
    };
    let small: Vec<usize> = dims.iter().copied().filter(|&d| d <= 4).collect();
    let small = if small.is_empty() { vec![1, 2] } else { small };
    run_trials(&mut r, seed, trials, |rng| {
        let mut pick = || small[rng.random_range(0..small.len())];
        let (a, b, c, d) = (pick(), pick(), pick(), pick());
        let e = |x: Result<Morphism>| x.map_err(|e| e.to_string());
        let mut worst = ts.pentagon_defect(a, b, c, d).map_err(|e| e.to_string())?;
        worst = worst.max(ts.triangle_defect(a, b).map_err(|e| e.to_string())?);
        for u in [ts.associator(a, b, c), ts.left_unitor(a), ts.right_unitor(a), ts.symmetry(a, b)] {
            worst = worst.max(u.unitary_defect());
        }
        let f1 = random_matrix(rng, field, b, a);
        let f2 = random_matrix(rng, field, a, c);
        let g1 = random_matrix(rng, field, d, c);
        let g2 = random_matrix(rng, field, c, b);
        let h = random_matrix(rng, field, a, d);
        let dagger_law = e(tensor(&f1, &g1))?.dagger().max_abs_diff(&e(tensor(&f1.dagger(), &g1.dagger()))?);
        let bifunctor = e(tensor(&(&f1 * &f2), &(&g1 * &g2)))?
            .max_abs_diff(&(&e(tensor(&f1, &g1))? * &e(tensor(&f2, &g2))?));
        // α natural in f1, g1, h
        let nat_l = &ts.associator(b, d, a) * &e(tensor(&e(tensor(&f1, &g1))?, &h))?;
        let nat_r = &e(tensor(&f1, &e(tensor(&g1, &h))?))? * &ts.associator(a, c, d);
        let natural = nat_l.max_abs_diff(&nat_r);
        // comparison m_{A,B}: built tensor to itself is the identity
        let comparison = ts.id(a * b).max_abs_diff(&e(tensor(&ts.id(a), &ts.id(b)))?);
        let scale = 1.0f64.max(f1.max_abs() * f2.max_abs() * g1.max_abs() * g2.max_abs() * (b * c).max(1) as f64);
        worst = worst.max(dagger_law).max(bifunctor / scale).max(natural / scale).max(comparison);
        // unequal f, g: A⊗B → C separated by some product of basis vectors
        let f = random_matrix(rng, field, c, a * b);
        let mut g = f.clone();
        if a * b > 0 && c > 0 {
            let (i, j) = (rng.random_range(0..c), rng.random_range(0..a * b));
            g.set(i, j, g.get(i, j) + Quat::ONE);
            let separated = (0..a).any(|x| {
                (0..b).any(|y| {
                    let v = tensor(&Matrix::basis_vector(field, a, x), &Matrix::basis_vector(field, b, y)).unwrap();
                    (&f * &v).max_abs_diff(&(&g * &v)) > tol.exact
                })
            });
            if !separated {
                return Err("unequal maps not separated by product vectors".into());
            }
        }
        Ok(worst)
    });
    r
}

/// `r⁻¹(f ⊗ λ)r = f ∘ λ` for `f ∈ C(K, A)`, `λ ∈ C(K, K)`.
pub fn check_bullet_equals_circ(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "monoidal.bullet_equals_circ",
        "scalar multiplication through the tensor coincides with composition",
        Some(field),
        tol.exact,
    );
    let ts = match TensorStructure::new(field) {
        Ok(ts) => ts,
        Err(e) => {
            r.record_error(seed, e.to_string());
            return r;
        }
    };
    let top = dims.iter().copied().max().unwrap_or(1).max(1);
    run_trials(&mut r, seed, trials, |rng| {
        let n = rng.random_range(1..=top);
        let f = random_matrix(rng, field, n, 1);
        let lambda = Matrix::scalar(random_scalar(rng, field));
        let bullet = ts.bullet(&f, &lambda).map_err(|e| e.to_string())?;
        Ok(bullet.max_abs_diff(&(&f * &lambda)))
    });
    r
}

/// Why ℍ is excluded: `ij = k ≠ −k = ji`, so scalars do not commute;
/// plus the unit-dimension proxy `dim(I ⊗ I) = dim I` forcing `dim I ≤ 1`.
pub fn quaternionic_obstruction(trials: u64, seed: u64) -> Report {
    let mut r = Report::new(
        "monoidal.quaternionic_obstruction",
        "a dagger monoidal structure forces commutative scalars, excluding ℍ",
        Some(FieldTag::H),
        0.0,
    );
    let ij = Quat::I * Quat::J;
    let ji = Quat::J * Quat::I;
    r.metric("ij_k", ij.z);
    r.metric("ji_k", ji.z);
    r.record_bool(seed, ij == Quat::K && ji == -Quat::K, || format!("ij = {ij:?}, ji = {ji:?}"));
    r.note("ij = k and ji = -k: the scalars of ℍ do not commute, so no dagger monoidal ⊗ on Hilb_ℍ");
    r.record_bool(seed, tensor(&Matrix::identity(FieldTag::H, 1), &Matrix::identity(FieldTag::H, 1)).is_err(), || {
        "tensor over ℍ was not rejected".into()
    });

    let mut worst_commutator = 0.0f64;
    let mut rng = crate::sample::rng_for("monoidal.quaternionic_obstruction.samples", seed);
    for _ in 0..trials {
        let (p, q) = (random_quat(&mut rng, FieldTag::H), random_quat(&mut rng, FieldTag::H));
        worst_commutator = worst_commutator.max((p * q - q * p).norm());
    }
    r.metric("max_sampled_commutator", worst_commutator);

    // I ⊗ I ≅ I needs u·u = u
    let admitted: Vec<usize> = (0..=4).filter(|&u| unit_dimension_admissible(u)).collect();
    r.record_bool(seed, admitted == [0, 1], || format!("unit dimensions admitted: {admitted:?}"));
    r.metric("unit_dim_2_admitted", f64::from(u8::from(unit_dimension_admissible(2))));
    r.note("proxy: only unit dimensions 0 and 1 admit a unitary unitor I ⊗ I → I");
    r
}

/// Unit-dimension proxy for a candidate unit of dimension `u`.
pub fn unit_dimension_admissible(u: usize) -> bool {
    u * u == u
}
