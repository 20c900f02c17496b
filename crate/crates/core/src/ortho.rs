//! The ortholattice of dagger subobjects of an object and its
//! identification with subspaces of `C(K, H)`.

use serde::{Deserialize, Serialize};

use crate::dagcat::{kernel, FdObject};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, range_basis, Matrix, Morphism};
use crate::report::{run_trials, Report};
use crate::sample::{random_isometry, random_matrix, Rng64};
use crate::scalars::{FieldTag, Scalar};
use crate::tolerance::ToleranceProfile;
use rand::Rng;

/// A dagger subobject, canonically identified by its projection.
#[derive(Debug, Clone)]
pub struct Subobject {
    iso: Morphism,
    proj: Morphism,
}

impl Subobject {
    /// Wraps an isometry; rejects anything with `‖m†m − I‖ > tol`.
    pub fn from_isometry(iso: Morphism, tol: f64) -> Result<Subobject> {
        let deviation = iso.isometry_defect();
        if deviation > tol {
            return Err(Error::NotOrthonormal { deviation });
        }
        let proj = &iso * &iso.dagger();
        Ok(Subobject { iso, proj })
    }

    /// The subobject spanned by the columns of an arbitrary matrix.
    pub fn span(columns: &Matrix, tol: &ToleranceProfile) -> Subobject {
        let iso = range_basis(columns, tol.gs_drop);
        let proj = &iso * &iso.dagger();
        Subobject { iso, proj }
    }

    pub fn top(field: FieldTag, n: usize) -> Subobject {
        let iso = Matrix::identity(field, n);
        Subobject { proj: iso.clone(), iso }
    }

    pub fn bottom(field: FieldTag, n: usize) -> Subobject {
        Subobject { iso: Matrix::zeros(field, n, 0), proj: Matrix::zeros(field, n, n) }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: FieldTag, n: usize, indices: &[usize]) -> Subobject {
        let cols: Vec<Matrix> = indices.iter().map(|&i| Matrix::basis_vector(field, n, i)).collect();
        let iso = Matrix::from_columns(field, n, &cols).expect("basis vectors");
        let proj = &iso * &iso.dagger();
        Subobject { iso, proj }
    }

    pub fn iso(&self) -> &Morphism {
        &self.iso
    }

    pub fn proj(&self) -> &Morphism {
        &self.proj
    }

    pub fn ambient(&self) -> FdObject {
        FdObject::new(self.iso.field(), self.iso.rows())
    }

    pub fn rank(&self) -> usize {
        self.iso.cols()
    }

    /// Equality under projections, within `tol`.
    pub fn same_as(&self, other: &Subobject, tol: f64) -> bool {
        self.ambient() == other.ambient() && self.proj.max_abs_diff(&other.proj) <= tol
    }

    fn check_ambient(&self, other: &Subobject) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch(format!(
                "{}^{} vs {}^{}",
                self.ambient().field,
                self.ambient().dim,
                other.ambient().field,
                other.ambient().dim
            )));
        }
        Ok(())
    }
}

/// `Sub†(H)` for a fixed ambient object.
#[derive(Debug, Clone, Copy)]
pub struct Ortholattice {
    pub ambient: FdObject,
    pub tol: ToleranceProfile,
}

impl Ortholattice {
    pub fn new(ambient: FdObject, tol: ToleranceProfile) -> Ortholattice {
        Ortholattice { ambient, tol }
    }

    pub fn top(&self) -> Subobject {
        Subobject::top(self.ambient.field, self.ambient.dim)
    }

    pub fn bottom(&self) -> Subobject {
        Subobject::bottom(self.ambient.field, self.ambient.dim)
    }

    pub fn leq(&self, f: &Subobject, g: &Subobject) -> Result<bool> {
        leq(f, g, &self.tol)
    }

    pub fn complement(&self, f: &Subobject) -> Subobject {
        orthocomplement(f, &self.tol)
    }

    pub fn meet(&self, f: &Subobject, g: &Subobject) -> Result<Subobject> {
        meet(f, g, &self.tol)
    }

    pub fn join(&self, f: &Subobject, g: &Subobject) -> Result<Subobject> {
        join(f, g, &self.tol)
    }

    pub fn eq(&self, f: &Subobject, g: &Subobject) -> bool {
        f.same_as(g, self.tol.lattice_eq)
    }
}

/// `f ≤ g` iff `g g† f = f`.
pub fn leq(f: &Subobject, g: &Subobject, tol: &ToleranceProfile) -> Result<bool> {
    f.check_ambient(g)?;
    Ok((&g.proj * &f.iso).max_abs_diff(&f.iso) <= tol.lattice_eq)
}

/// `f⊥ = ker(f†)`.
pub fn orthocomplement(f: &Subobject, tol: &ToleranceProfile) -> Subobject {
    let iso = kernel(&f.iso.dagger(), tol);
    let proj = &iso * &iso.dagger();
    Subobject { iso, proj }
}

/// Closed span of both subobjects.
pub fn join(f: &Subobject, g: &Subobject, tol: &ToleranceProfile) -> Result<Subobject> {
    f.check_ambient(g)?;
    Ok(Subobject::span(&f.iso.hstack(&g.iso)?, tol))
}

/// `f ∧ g = (f⊥ ∨ g⊥)⊥`.
pub fn meet(f: &Subobject, g: &Subobject, tol: &ToleranceProfile) -> Result<Subobject> {
    let j = join(&orthocomplement(f, tol), &orthocomplement(g, tol), tol)?;
    Ok(orthocomplement(&j, tol))
}

/// Pullback of `f` along `g`, i.e. the intersection of the ranges computed
/// as the common kernel of both complements' daggers.
pub fn meet_pullback(f: &Subobject, g: &Subobject, tol: &ToleranceProfile) -> Result<Subobject> {
    f.check_ambient(g)?;
    let stacked = orthocomplement(f, tol).iso.dagger().vstack(&orthocomplement(g, tol).iso.dagger())?;
    let iso = kernel(&stacked, tol);
    let proj = &iso * &iso.dagger();
    Ok(Subobject { iso, proj })
}

/// Image of a subobject in `C(K, H)`: the subspace of vectors `x` with
/// `P x = x`.
#[derive(Debug, Clone)]
pub struct ClosedSubspace {
    pub field: FieldTag,
    pub ambient: usize,
    pub projection: Matrix,
}

impl ClosedSubspace {
    pub fn contains(&self, x: &Matrix, tol: f64) -> bool {
        (&self.projection * x).max_abs_diff(x) <= tol * 1.0f64.max(x.max_abs())
    }

    pub fn subset_of(&self, other: &ClosedSubspace, tol: f64) -> bool {
        (&other.projection * &self.projection).max_abs_diff(&self.projection) <= tol
    }

    pub fn orthogonal(&self) -> ClosedSubspace {
        ClosedSubspace {
            field: self.field,
            ambient: self.ambient,
            projection: &Matrix::identity(self.field, self.ambient) - &self.projection,
        }
    }

    pub fn dim(&self) -> usize {
        self.projection.trace().w.round().max(0.0) as usize
    }
}

pub fn phi(f: &Subobject) -> ClosedSubspace {
    ClosedSubspace { field: f.iso.field(), ambient: f.iso.rows(), projection: f.proj.clone() }
}

/// Inverse of `phi`: the subobject whose isometry spans the subspace.
pub fn phi_inverse(s: &ClosedSubspace, tol: &ToleranceProfile) -> Subobject {
    Subobject::span(&s.projection, tol)
}

/// A random subobject of the given rank.
pub fn random_subobject(rng: &mut Rng64, field: FieldTag, n: usize, rank: usize) -> Subobject {
    Subobject::from_isometry(random_isometry(rng, field, n, rank), 1e-10).expect("sampled isometry")
}

fn random_any(rng: &mut Rng64, field: FieldTag, n: usize) -> Subobject {
    let k = rng.random_range(0..=n);
    random_subobject(rng, field, n, k)
}

/// `1 = mm† + m⊥m⊥†` and `h = Ph + P⊥h` on sampled subobjects.
pub fn check_orthomodular(h: FdObject, trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new(
        "ortho.orthomodular",
        "C(K,H) is an orthomodular space: 1 = mm† + m⊥m⊥†",
        Some(h.field),
        tol.residual,
    );
    let n = h.dim;
    run_trials(&mut r, seed, trials, |rng| {
        let m = random_any(rng, h.field, n);
        let c = orthocomplement(&m, tol);
        if m.rank() + c.rank() != n {
            return Err(format!("rank {} + complement rank {} != {n}", m.rank(), c.rank()));
        }
        let id = (&m.proj + &c.proj).max_abs_diff(&Matrix::identity(h.field, n));
        let x = random_matrix(rng, h.field, n, 1);
        let split = (&(&m.proj * &x) + &(&c.proj * &x)).max_abs_diff(&x);
        let cross = Matrix::inner(&(&m.proj * &x), &(&c.proj * &x)).map(|s| s.norm()).unwrap_or(0.0);
        Ok(id.max(split).max(cross))
    });
    r
}

/// Lattice laws on sampled pairs and triples: complement involution and
/// order reversal, bounds, absorption, De Morgan, `f ∧ f⊥ = 0`,
/// `f ∨ f⊥ = 1`, orthomodular law, and the pullback cross-check.
pub fn check_ortholattice(h: FdObject, trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new(
        "ortho.ortholattice",
        "dagger subobjects form an ortholattice with f⊥ = ker(f†)",
        Some(h.field),
        0.0,
    );
    let n = h.dim;
    let lat = Ortholattice::new(h, *tol);
    run_trials(&mut r, seed, trials, |rng| {
        let f = random_any(rng, h.field, n);
        // g often nested above f to exercise the order
        let g = if rng.random_bool(0.5) {
            let k = rng.random_range(0..=n);
            let extra = random_matrix(rng, h.field, n, k);
            Subobject::span(&f.iso.hstack(&extra).unwrap(), tol)
        } else {
            random_any(rng, h.field, n)
        };
        laws(&lat, &f, &g).map(|()| 0.0)
    });
    r
}

fn laws(lat: &Ortholattice, f: &Subobject, g: &Subobject) -> std::result::Result<(), String> {
    let e = |x: Result<Subobject>| x.map_err(|e| e.to_string());
    let b = |x: Result<bool>| x.map_err(|e| e.to_string());
    let fc = lat.complement(f);
    let gc = lat.complement(g);
    let require = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
    require(lat.eq(&lat.complement(&fc), f), "f⊥⊥ ≠ f")?;
    require(lat.eq(&e(lat.meet(f, &fc))?, &lat.bottom()), "f ∧ f⊥ ≠ 0")?;
    require(lat.eq(&e(lat.join(f, &fc))?, &lat.top()), "f ∨ f⊥ ≠ 1")?;
    let m = e(lat.meet(f, g))?;
    let j = e(lat.join(f, g))?;
    require(b(lat.leq(&m, f))? && b(lat.leq(&m, g))?, "meet is not a lower bound")?;
    require(b(lat.leq(f, &j))? && b(lat.leq(g, &j))?, "join is not an upper bound")?;
    require(lat.eq(&e(lat.join(f, &m))?, f), "absorption f ∨ (f ∧ g) ≠ f")?;
    require(lat.eq(&e(lat.meet(f, &j))?, f), "absorption f ∧ (f ∨ g) ≠ f")?;
    require(lat.eq(&lat.complement(&j), &e(lat.meet(&fc, &gc))?), "(f ∨ g)⊥ ≠ f⊥ ∧ g⊥")?;
    require(lat.eq(&lat.complement(&m), &e(lat.join(&fc, &gc))?), "(f ∧ g)⊥ ≠ f⊥ ∨ g⊥")?;
    require(lat.eq(&m, &e(meet_pullback(f, g, &lat.tol))?), "meet disagrees with pullback")?;
    let fg = b(lat.leq(f, g))?;
    if fg {
        require(b(lat.leq(&gc, &fc))?, "f ≤ g but not g⊥ ≤ f⊥")?;
        // orthomodular law: f ≤ g ⟹ g = f ∨ (f⊥ ∧ g)
        require(lat.eq(g, &e(lat.join(f, &e(lat.meet(&fc, g))?))?), "orthomodular law fails")?;
    }
    require(b(lat.leq(&lat.bottom(), f))? && b(lat.leq(f, &lat.top()))?, "bounds fail")?;
    Ok(())
}

/// `φ` preserves and reflects order, commutes with complements, is
/// injective, and every sampled subspace is hit.
pub fn check_phi(h: FdObject, trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new(
        "ortho.phi",
        "φ: Sub†(H) → closed subspaces of C(K,H) is an ortholattice isomorphism",
        Some(h.field),
        0.0,
    );
    let n = h.dim;
    let mut disagreements = 0u64;
    run_trials(&mut r, seed, trials, |rng| {
        let f = random_any(rng, h.field, n);
        let g = if rng.random_bool(0.5) { random_any(rng, h.field, n) } else { f.clone() };
        let (pf, pg) = (phi(&f), phi(&g));
        let order = leq(&f, &g, tol).map_err(|e| e.to_string())?;
        // subspace inclusion checked on a spanning set of φ(f)
        let included = f.iso.columns().iter().all(|x| pg.contains(x, tol.lattice_eq));
        if order != included || order != pf.subset_of(&pg, tol.lattice_eq) {
            disagreements += 1;
            return Err(format!("order {order} vs inclusion {included}"));
        }
        let comp = phi(&orthocomplement(&f, tol));
        if comp.projection.max_abs_diff(&pf.orthogonal().projection) > tol.lattice_eq {
            disagreements += 1;
            return Err("φ(f⊥) ≠ φ(f)⊥".into());
        }
        let same = f.same_as(&g, tol.lattice_eq);
        let same_image = pf.projection.max_abs_diff(&pg.projection) <= tol.lattice_eq;
        if same != same_image {
            disagreements += 1;
            return Err("φ is not injective".into());
        }
        // surjectivity: a subspace given by an arbitrary spanning set comes back
        let k = rng.random_range(0..=n);
        let spanning = random_matrix(rng, h.field, n, k);
        let target = ClosedSubspace {
            field: h.field,
            ambient: n,
            projection: Subobject::span(&spanning, tol).proj,
        };
        let back = phi(&phi_inverse(&target, tol));
        if back.projection.max_abs_diff(&target.projection) > tol.lattice_eq || target.dim() != k {
            disagreements += 1;
            return Err("subspace not reconstructed".into());
        }
        Ok(0.0)
    });
    r.metric("disagreements", disagreements as f64);
    r
}

/// For a nested chain, the greatest element equals the join of the chain.
pub fn check_completeness_proxy(h: FdObject, trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new(
        "ortho.completeness_proxy",
        "finite directed families of subobjects have their maximum as join",
        Some(h.field),
        0.0,
    );
    r.note("finite proxy only: cofinality of infinite directed families is not exercised");
    let n = h.dim;
    run_trials(&mut r, seed, trials, |rng| {
        let u = random_isometry(rng, h.field, n, n);
        let mut chain = Vec::new();
        let mut k = 0;
        while k < n {
            k += rng.random_range(1..=n - k);
            chain.push(Subobject::from_isometry(u.submatrix(0..n, 0..k), 1e-10).map_err(|e| e.to_string())?);
        }
        let Some(max) = chain.last().cloned() else {
            return Ok(0.0);
        };
        let mut acc = Subobject::bottom(h.field, n);
        for s in &chain {
            acc = join(&acc, s, tol).map_err(|e| e.to_string())?;
        }
        if acc.same_as(&max, tol.lattice_eq) {
            Ok(0.0)
        } else {
            Err("join of chain differs from its maximum".into())
        }
    });
    r
}

/// `{"ambient": n, "field": "C", "basis": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient: usize,
    pub field: FieldTag,
    pub basis: Vec<Vec<Scalar>>,
}

impl SubspaceJson {
    /// Validates and orthonormalizes. Linearly dependent basis vectors are
    /// dropped.
    pub fn to_subobject(&self, tol: &ToleranceProfile) -> Result<Subobject> {
        if self.ambient > crate::linalg::MAX_PARSED_DIM {
            return Err(Error::Shape(format!(
                "ambient dimension {} exceeds {}",
                self.ambient,
                crate::linalg::MAX_PARSED_DIM
            )));
        }
        let mut cols = Vec::with_capacity(self.basis.len());
        for (idx, v) in self.basis.iter().enumerate() {
            if v.len() != self.ambient {
                return Err(Error::Shape(format!(
                    "basis vector {idx} has {} entries, ambient is {}",
                    v.len(),
                    self.ambient
                )));
            }
            let mut entries = Vec::with_capacity(v.len());
            for s in v {
                if s.field() > self.field {
                    return Err(Error::FieldMismatch { expected: self.field, found: s.field() });
                }
                if !s.value().components().iter().all(|c| c.is_finite()) {
                    return Err(Error::Parse("non-finite entry".into()));
                }
                entries.push(s.value());
            }
            cols.push(Matrix::column_vector(self.field, &entries));
        }
        let m = Matrix::from_columns(self.field, self.ambient, &cols)?;
        let iso = gram_schmidt(&m, tol.gs_drop).isometry;
        Subobject::from_isometry(iso, tol.orthonormal.max(1e-10))
    }

    pub fn from_subobject(s: &Subobject) -> SubspaceJson {
        let iso = s.iso();
        SubspaceJson {
            ambient: iso.rows(),
            field: iso.field(),
            basis: iso.columns().iter().map(|c| (0..c.rows()).map(|i| c.entry(i, 0)).collect()).collect(),
        }
    }
}

pub fn parse_subspace(text: &str, tol: &ToleranceProfile) -> Result<Subobject> {
    let j: SubspaceJson = serde_json::from_str(text)?;
    j.to_subobject(tol)
}
