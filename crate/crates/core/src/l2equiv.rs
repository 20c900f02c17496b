//! `ℓ²X` for finite `X`, orthonormal families, finite directed colimits of
//! dagger monos, the hom-functor `C(K, −)` and the equivalence checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dagcat::FdObject;
use crate::error::{Error, Result};
use crate::linalg::{complete_basis, Matrix, Morphism, Vector};
use crate::report::{run_trials, Report};
use crate::sample::{random_matrix, random_scalar, Rng64};
use crate::scalars::{FieldTag, Quat, Scalar};
use crate::tolerance::ToleranceProfile;
use crate::unidecomp::{decompose, DecomposeOptions, UnitaryDecomposition};

/// Vectors of `C(K, H)` indexed by labels, pairwise orthonormal.
#[derive(Debug, Clone)]
pub struct OrthonormalFamily {
    ambient: FdObject,
    labels: Vec<String>,
    members: Vec<Vector>,
}

impl OrthonormalFamily {
    /// Rejects duplicate labels, wrong shapes, and Gram deviation above
    /// `tol`.
    pub fn new(ambient: FdObject, labels: Vec<String>, members: Vec<Vector>, tol: f64) -> Result<OrthonormalFamily> {
        if labels.len() != members.len() {
            return Err(Error::Shape(format!("{} labels for {} members", labels.len(), members.len())));
        }
        check_labels(&labels)?;
        for v in &members {
            if v.field() != ambient.field || v.shape() != (ambient.dim, 1) {
                return Err(Error::Shape(format!(
                    "member is {}x{} over {}, expected a {}-vector over {}",
                    v.rows(),
                    v.cols(),
                    v.field(),
                    ambient.dim,
                    ambient.field
                )));
            }
        }
        let m = Matrix::from_columns(ambient.field, ambient.dim, &members)?;
        let deviation = m.isometry_defect();
        if deviation > tol {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(OrthonormalFamily { ambient, labels, members })
    }

    /// Columns of an isometry, labelled `0, 1, …`.
    pub fn from_mono(m: &Morphism, tol: f64) -> Result<OrthonormalFamily> {
        let labels = (0..m.cols()).map(|i| i.to_string()).collect();
        OrthonormalFamily::new(FdObject::new(m.field(), m.rows()), labels, m.columns(), tol)
    }

    pub fn empty(ambient: FdObject) -> OrthonormalFamily {
        OrthonormalFamily { ambient, labels: Vec::new(), members: Vec::new() }
    }

    pub fn ambient(&self) -> FdObject {
        self.ambient
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn members(&self) -> &[Vector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::Domain(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

/// `ℓ²X` with its standard components.
pub fn l2(labels: &[String], field: FieldTag) -> Result<(FdObject, OrthonormalFamily)> {
    check_labels(labels)?;
    let n = labels.len();
    let obj = FdObject::new(field, n);
    let members = (0..n).map(|i| Matrix::basis_vector(field, n, i)).collect();
    Ok((obj, OrthonormalFamily { ambient: obj, labels: labels.to_vec(), members }))
}

/// The map `⊕_A K → ℓ²X` induced by `A ⊆ X`.
pub fn inclusion(sub: &[String], labels: &[String], field: FieldTag) -> Result<Morphism> {
    let cols = sub
        .iter()
        .map(|a| {
            labels
                .iter()
                .position(|x| x == a)
                .map(|i| Matrix::basis_vector(field, labels.len(), i))
                .ok_or_else(|| Error::Domain(format!("label {a:?} not in the label set")))
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(field, labels.len(), &cols)
}

/// The dagger mono whose columns are the family's members.
pub fn family_to_mono(f: &OrthonormalFamily) -> Morphism {
    Matrix::from_columns(f.ambient.field, f.ambient.dim, &f.members).expect("validated family")
}

/// Extends `seed` to an orthonormal basis of `h`, adding the first standard
/// basis vector with nonzero complement projection until none is left.
pub fn orthonormal_basis(h: FdObject, seed: &OrthonormalFamily) -> Result<OrthonormalFamily> {
    if seed.ambient != h {
        return Err(Error::AmbientMismatch(format!(
            "seed lives in {}^{}, basis requested for {}^{}",
            seed.ambient.field, seed.ambient.dim, h.field, h.dim
        )));
    }
    let full = complete_basis(&family_to_mono(seed));
    let mut labels = seed.labels.clone();
    let mut next = 0usize;
    for _ in seed.len()..h.dim {
        while labels.iter().any(|l| *l == format!("basis{next}")) {
            next += 1;
        }
        labels.push(format!("basis{next}"));
        next += 1;
    }
    let mut members = seed.members.clone();
    members.extend(full.columns().into_iter().skip(seed.len()));
    Ok(OrthonormalFamily { ambient: h, labels, members })
}

/// A finite poset of objects with dagger-mono transitions along its
/// generating edges.
#[derive(Debug, Clone)]
pub struct DirectedDiagram {
    field: FieldTag,
    names: Vec<String>,
    dims: Vec<usize>,
    /// `(from, to, map)`
    edges: Vec<(usize, usize, Morphism)>,
}

/// The colimit of a finite directed diagram: the value at its maximum.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub apex: FdObject,
    pub apex_node: String,
    /// Leg `D(x) → apex` for each node, in node order.
    pub legs: Vec<(String, Morphism)>,
}

impl Colimit {
    /// Mediating map into another cocone `c_x: D(x) → Z`, namely `c_max`,
    /// after checking `c_x = c_max ∘ leg_x` within `tol`.
    pub fn mediate(&self, cocone: &[(String, Morphism)], tol: f64) -> Result<Morphism> {
        let find = |name: &str| cocone.iter().find(|(n, _)| n == name).map(|(_, m)| m);
        let top = find(&self.apex_node)
            .ok_or_else(|| Error::Domain(format!("cocone has no leg at {}", self.apex_node)))?;
        for (name, leg) in &self.legs {
            let c = find(name).ok_or_else(|| Error::Domain(format!("cocone has no leg at {name}")))?;
            let residual = top.try_matmul(leg)?.max_abs_diff(c);
            if residual > tol {
                return Err(Error::NotDirected(format!("cocone leg at {name} does not factor ({residual:e})")));
            }
        }
        Ok(top.clone())
    }
}

impl DirectedDiagram {
    pub fn new(field: FieldTag, nodes: Vec<(String, usize)>, edges: Vec<(String, String, Morphism)>) -> Result<Self> {
        let (names, dims): (Vec<String>, Vec<usize>) = nodes.into_iter().unzip();
        check_labels(&names)?;
        let index = |n: &str| {
            names.iter().position(|x| x == n).ok_or_else(|| Error::Domain(format!("unknown node {n:?}")))
        };
        let mut resolved = Vec::with_capacity(edges.len());
        for (from, to, map) in edges {
            let (a, b) = (index(&from)?, index(&to)?);
            if map.field() != field {
                return Err(Error::FieldMismatch { expected: field, found: map.field() });
            }
            if map.shape() != (dims[b], dims[a]) {
                return Err(Error::Shape(format!(
                    "edge {from} -> {to} is {}x{}, expected {}x{}",
                    map.rows(),
                    map.cols(),
                    dims[b],
                    dims[a]
                )));
            }
            resolved.push((a, b, map));
        }
        Ok(DirectedDiagram { field, names, dims, edges: resolved })
    }

    /// Chain `K → K² → … → Kⁿ` of first-coordinates inclusions.
    pub fn chain(field: FieldTag, n: usize) -> DirectedDiagram {
        let nodes = (1..=n).map(|d| (format!("K{d}"), d)).collect();
        let edges = (1..n)
            .map(|d| {
                let m = Matrix::from_fn(field, d + 1, d, |i, j| if i == j { Quat::ONE } else { Quat::ZERO });
                (format!("K{d}"), format!("K{}", d + 1), m)
            })
            .collect();
        DirectedDiagram::new(field, nodes, edges).expect("chain is well formed")
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, usize)> {
        self.names.iter().map(String::as_str).zip(self.dims.iter().copied())
    }

    /// Composite transitions from `source` to every reachable node; checks
    /// that every path gives the same map.
    fn transitions_from(&self, source: usize, tol: f64) -> Result<Vec<Option<Morphism>>> {
        let n = self.names.len();
        let mut maps: Vec<Option<Morphism>> = vec![None; n];
        maps[source] = Some(Matrix::identity(self.field, self.dims[source]));
        let mut queue = VecDeque::from([source]);
        while let Some(y) = queue.pop_front() {
            let to_y = maps[y].clone().expect("visited");
            for (a, b, e) in &self.edges {
                if *a != y {
                    continue;
                }
                let composite = e * &to_y;
                match &maps[*b] {
                    Some(existing) => {
                        let residual = existing.max_abs_diff(&composite);
                        if residual > tol {
                            return Err(Error::NotDirected(format!(
                                "paths {} -> {} disagree by {residual:e}",
                                self.names[source], self.names[*b]
                            )));
                        }
                    }
                    None => {
                        maps[*b] = Some(composite);
                        queue.push_back(*b);
                    }
                }
            }
        }
        Ok(maps)
    }

    /// Checks transitions are dagger monos, triangles commute, the order is
    /// antisymmetric and every pair has an upper bound. Returns the
    /// maximum and the legs into it.
    pub fn colimit(&self, tol: &ToleranceProfile) -> Result<Colimit> {
        let n = self.names.len();
        if n == 0 {
            return Err(Error::NotDirected("empty diagram".into()));
        }
        for (a, b, e) in &self.edges {
            let deviation = e.isometry_defect();
            if deviation > tol.orthonormal.max(1e-10) {
                return Err(Error::NotDirected(format!(
                    "transition {} -> {} is not a dagger mono (deviation {deviation:e})",
                    self.names[*a], self.names[*b]
                )));
            }
        }
        let commute_tol = 1e-10;
        let reach: Vec<Vec<Option<Morphism>>> =
            (0..n).map(|s| self.transitions_from(s, commute_tol)).collect::<Result<_>>()?;
        for x in 0..n {
            for y in 0..n {
                if x != y && reach[x][y].is_some() && reach[y][x].is_some() {
                    return Err(Error::NotDirected(format!(
                        "{} and {} reach each other; not a poset",
                        self.names[x], self.names[y]
                    )));
                }
            }
        }
        // In a finite directed poset the maximum is the node reached from
        // every node.
        let max = (0..n)
            .find(|&m| (0..n).all(|x| reach[x][m].is_some()))
            .ok_or_else(|| Error::NotDirected("some pair has no upper bound".into()))?;
        let legs = (0..n)
            .map(|x| (self.names[x].clone(), reach[x][max].clone().expect("reaches max")))
            .collect();
        Ok(Colimit {
            apex: FdObject::new(self.field, self.dims[max]),
            apex_node: self.names[max].clone(),
            legs,
        })
    }
}

pub fn directed_colimit(d: &DirectedDiagram, tol: &ToleranceProfile) -> Result<Colimit> {
    d.colimit(tol)
}

/// `{"field": "R", "nodes": {"a": 1, ...}, "adjacency": {"a": [{"to": "b", "map": matrix}]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub field: FieldTag,
    pub nodes: BTreeMap<String, usize>,
    #[serde(default)]
    pub adjacency: BTreeMap<String, Vec<EdgeJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub to: String,
    pub map: Matrix,
}

impl DiagramJson {
    pub fn to_diagram(&self) -> Result<DirectedDiagram> {
        if let Some((name, d)) = self.nodes.iter().find(|(_, &d)| d > crate::linalg::MAX_PARSED_DIM) {
            return Err(Error::Shape(format!("node {name:?} has dimension {d}, limit {}", crate::linalg::MAX_PARSED_DIM)));
        }
        let nodes = self.nodes.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let mut edges = Vec::new();
        for (from, outs) in &self.adjacency {
            for e in outs {
                edges.push((from.clone(), e.to.clone(), e.map.clone()));
            }
        }
        DirectedDiagram::new(self.field, nodes, edges)
    }
}

pub fn parse_diagram(text: &str) -> Result<DirectedDiagram> {
    serde_json::from_str::<DiagramJson>(text)?.to_diagram()
}

/// Label sets serialize as JSON string arrays.
pub fn parse_labels(text: &str) -> Result<Vec<String>> {
    let labels: Vec<String> = serde_json::from_str(text)?;
    check_labels(&labels)?;
    Ok(labels)
}

/// `C(K, H)`: column vectors with `⟨u, v⟩ = v†u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomSpace {
    pub field: FieldTag,
    pub dim: usize,
}

impl HomSpace {
    pub fn inner(&self, u: &Vector, v: &Vector) -> Result<Scalar> {
        for w in [u, v] {
            if w.shape() != (self.dim, 1) {
                return Err(Error::Shape(format!("expected a {}-vector", self.dim)));
            }
        }
        Matrix::inner(u, v)
    }
}

pub fn hom_functor(h: FdObject) -> HomSpace {
    HomSpace { field: h.field, dim: h.dim }
}

/// `C(K, f)`: post-composition with `f`.
#[derive(Debug, Clone)]
pub struct HomMap {
    pub source: HomSpace,
    pub target: HomSpace,
    matrix: Morphism,
}

impl HomMap {
    pub fn apply(&self, h: &Vector) -> Result<Vector> {
        self.matrix.try_matmul(h)
    }

    pub fn adjoint(&self) -> HomMap {
        hom_map(&self.matrix.dagger())
    }

    pub fn compose(&self, first: &HomMap) -> Result<HomMap> {
        Ok(hom_map(&self.matrix.try_matmul(&first.matrix)?))
    }

    pub fn matrix(&self) -> &Morphism {
        &self.matrix
    }
}

pub fn hom_map(f: &Morphism) -> HomMap {
    HomMap {
        source: HomSpace { field: f.field(), dim: f.cols() },
        target: HomSpace { field: f.field(), dim: f.rows() },
        matrix: f.clone(),
    }
}

/// Outcome of the fullness pipeline.
#[derive(Debug, Clone)]
pub struct Fullness {
    pub t: Morphism,
    pub decomposition: Option<UnitaryDecomposition>,
    /// Reductions applied before decomposing, in order.
    pub reductions: Vec<String>,
    pub residual: f64,
}

fn first_injection(field: FieldTag, from: usize, to: usize) -> Morphism {
    Matrix::from_fn(field, to, from, |i, j| if i == j { Quat::ONE } else { Quat::ZERO })
}

/// Recovers `t` with `C(K, t) = T` from a bounded map `T`, through the
/// unitary decomposition of a square reduction of `T` and the lift of each
/// unitary to the dagger mono of its column family. With `direct` the
/// decomposition is skipped and `t = T`.
pub fn full_via_unitaries(big_t: &Morphism, tol: &ToleranceProfile, direct: bool) -> Result<Fullness> {
    if direct {
        return Ok(Fullness { t: big_t.clone(), decomposition: None, reductions: vec!["direct".into()], residual: 0.0 });
    }
    let mut reductions = Vec::new();
    let (t, decomposition) = lift_rectangular(big_t, tol, &mut reductions)?;
    let residual = hom_map(&t).matrix().max_abs_diff(big_t);
    Ok(Fullness { t, decomposition, reductions, residual })
}

fn lift_rectangular(
    big_t: &Morphism,
    tol: &ToleranceProfile,
    reductions: &mut Vec<String>,
) -> Result<(Morphism, Option<UnitaryDecomposition>)> {
    let field = big_t.field();
    let (rows, cols) = big_t.shape();
    if cols > rows {
        reductions.push(format!("dagger: {rows}x{cols} -> {cols}x{rows}"));
        let (t, d) = lift_rectangular(&big_t.dagger(), tol, reductions)?;
        return Ok((t.dagger(), d));
    }
    if rows > cols {
        // T m† is square; t = t̃ m since m†m = 1
        let m = first_injection(field, cols, rows);
        reductions.push(format!("pad domain by dagger mono {cols} -> {rows}"));
        let (t, d) = lift_square(&(big_t * &m.dagger()), tol, reductions)?;
        return Ok((&t * &m, d));
    }
    lift_square(big_t, tol, reductions)
}

fn lift_square(
    big_t: &Morphism,
    tol: &ToleranceProfile,
    reductions: &mut Vec<String>,
) -> Result<(Morphism, Option<UnitaryDecomposition>)> {
    let field = big_t.field();
    let n = big_t.rows();
    if big_t.is_zero() {
        reductions.push("zero operator".into());
        return Ok((Matrix::zeros(field, n, n), None));
    }
    if field != FieldTag::C && n % 2 == 1 {
        // conjugate by a dagger mono into even dimension
        let m = first_injection(field, n, n + 1);
        reductions.push(format!("extend by dagger mono {n} -> {}", n + 1));
        let inner = &(&m * big_t) * &m.dagger();
        let (t, d) = lift_square(&inner, tol, reductions)?;
        return Ok((&(&m.dagger() * &t) * &m, d));
    }
    let d = decompose(big_t, tol, DecomposeOptions::default())?;
    let mut t = Matrix::zeros(field, n, n);
    for term in &d.terms {
        // a unitary sends the standard basis to an orthonormal family,
        // whose induced dagger mono is the lift
        let family = OrthonormalFamily::from_mono(&term.factor, tol.unitary.max(1e-10))?;
        let lifted = family_to_mono(&family);
        t = &t + &lifted.scale_left(term.coeff.value());
    }
    Ok((t, Some(d)))
}

/// Gram–Schmidt of the standard basis against the form `⟨u,v⟩ = v†Gu`.
/// Returns `C` with `C†GC = I`.
pub fn gram_orthonormalize(gram: &Matrix) -> Result<Matrix> {
    let n = gram.rows();
    if !gram.is_square() {
        return Err(Error::Shape("Gram matrix must be square".into()));
    }
    let field = gram.field();
    let mut basis: Vec<Matrix> = Vec::with_capacity(n);
    let form = |u: &Matrix, v: &Matrix| (&(&v.dagger() * gram) * u).get(0, 0);
    for i in 0..n {
        let mut u = Matrix::basis_vector(field, n, i);
        for _ in 0..2 {
            for q in &basis {
                let c = form(&u, q);
                u = &u - &q.scale_right(c);
            }
        }
        let norm_sq = form(&u, &u).w;
        if norm_sq <= 0.0 {
            return Err(Error::Domain(format!("form is not positive definite at step {i}")));
        }
        basis.push(u.scale(1.0 / norm_sq.sqrt()));
    }
    Matrix::from_columns(field, n, &basis)
}

fn random_gram(rng: &mut Rng64, field: FieldTag, n: usize) -> Matrix {
    let a = random_matrix(rng, field, n, n);
    &(&a.dagger() * &a) + &Matrix::identity(field, n).scale(0.5)
}

/// Faithfulness, essential surjectivity, fullness and the functor laws of
/// `C(K, −)` on sampled instances.
pub fn verify_equivalence(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Vec<Report> {
    let pick = |rng: &mut Rng64| dims[rng.random_range(0..dims.len())];

    let mut faithful = Report::new(
        "equivalence.faithful",
        "C(K,−) is faithful: unequal parallel maps are separated by some h: K → A",
        Some(field),
        0.0,
    );
    faithful.note("separators are dagger monos from the generator; the generator/dagger-generator distinction is not decided");
    run_trials(&mut faithful, seed, trials, |rng| {
        let (a, b) = (pick(rng).max(1), pick(rng).max(1));
        let f = random_matrix(rng, field, b, a);
        let mut g = f.clone();
        let (i, j) = (rng.random_range(0..b), rng.random_range(0..a));
        g.set(i, j, f.get(i, j) + random_scalar(rng, field).value() + Quat::ONE);
        if separate(&f, &g, tol).is_none() {
            return Err("no basis vector separates f and g".into());
        }
        let z = Matrix::zeros(field, b, a);
        if separate(&z, &z, tol).is_some() {
            return Err("equal maps were separated".into());
        }
        Ok(0.0)
    });

    let mut eso = Report::new(
        "equivalence.essentially_surjective",
        "every Hilbert space is unitarily isomorphic to some C(K, ℓ²X)",
        Some(field),
        tol.reconstruct,
    );
    run_trials(&mut eso, seed, trials, |rng| {
        let n = pick(rng);
        let gram = random_gram(rng, field, n);
        let c = gram_orthonormalize(&gram).map_err(|e| e.to_string())?;
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let (obj, _) = l2(&labels, field).map_err(|e| e.to_string())?;
        // c: ℓ²X → (𝕂ⁿ, G) is unitary iff c†Gc = I and c c† G = I
        let isometric = (&(&c.dagger() * &gram) * &c).max_abs_diff(&Matrix::identity(field, obj.dim));
        let onto = (&(&c * &c.dagger()) * &gram).max_abs_diff(&Matrix::identity(field, n));
        Ok(isometric.max(onto / gram.max_abs().max(1.0)))
    });

    let mut full = Report::new(
        "equivalence.full",
        "every bounded map C(K,H₁) → C(K,H₂) is C(K,t) for some t, via unitary decompositions",
        Some(field),
        tol.reconstruct,
    );
    run_trials(&mut full, seed, trials, |rng| {
        let (a, b) = (pick(rng), pick(rng));
        let t = random_matrix(rng, field, b, a);
        let r = full_via_unitaries(&t, tol, false).map_err(|e| e.to_string())?;
        if let Some(d) = &r.decomposition {
            if d.terms.len() > d.bound() {
                return Err(format!("{} terms exceed the bound {}", d.terms.len(), d.bound()));
            }
            let defect = d.max_factor_defect();
            if defect > tol.unitary {
                return Err(format!("factor unitary defect {defect:e}"));
            }
        }
        Ok(r.residual)
    });

    let mut functor = Report::new(
        "equivalence.hom_functor",
        "C(K,−) is a dagger functor into Hilbert spaces",
        Some(field),
        tol.residual,
    );
    run_trials(&mut functor, seed, trials, |rng| {
        let (a, b, c) = (pick(rng), pick(rng), pick(rng));
        let f = random_matrix(rng, field, b, a);
        let g = random_matrix(rng, field, c, b);
        let f2 = random_matrix(rng, field, b, a);
        let (h1, h2) = (random_matrix(rng, field, a, 1), random_matrix(rng, field, b, 1));
        let hf = hom_map(&f);
        let ip = |u: &Matrix, v: &Matrix| Matrix::inner(u, v).map_err(|e| e.to_string());
        let lhs = ip(&hf.adjoint().apply(&h2).map_err(|e| e.to_string())?, &h1)?;
        let rhs = ip(&h2, &hf.apply(&h1).map_err(|e| e.to_string())?)?;
        let adjoint = (lhs - rhs).norm();
        let composed = hom_map(&g).compose(&hf).map_err(|e| e.to_string())?;
        let functorial = composed.apply(&h1).unwrap().max_abs_diff(&hom_map(&g).apply(&hf.apply(&h1).unwrap()).unwrap());
        let identity = hom_map(&Matrix::identity(field, a)).apply(&h1).unwrap().max_abs_diff(&h1);
        let additive = hom_map(&(&f + &f2))
            .apply(&h1)
            .unwrap()
            .max_abs_diff(&(&hf.apply(&h1).unwrap() + &hom_map(&f2).apply(&h1).unwrap()));
        let scale = 1.0f64.max(f.max_abs() * g.max_abs() * (a * b).max(1) as f64);
        Ok(adjoint.max(functorial).max(identity).max(additive) / scale)
    });

    vec![faithful, eso, full, functor]
}

/// First standard basis vector `e_j` with `f e_j ≠ g e_j`.
pub fn separate(f: &Morphism, g: &Morphism, tol: &ToleranceProfile) -> Option<usize> {
    (0..f.cols()).find(|&j| {
        let e = Matrix::basis_vector(f.field(), f.cols(), j);
        (f * &e).max_abs_diff(&(g * &e)) > tol.exact
    })
}

/// Colimits of sampled chains and diamonds, and their universality against
/// a second cocone.
pub fn check_directed_colimits(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "C.directed_colimits",
        "dagger monos have directed colimits",
        Some(field),
        tol.residual,
    );
    r.note("finite directed posets have a maximum; cofinal infinite families are out of scope");
    let top = dims.iter().copied().max().unwrap_or(1).max(2);
    run_trials(&mut r, seed, trials, |rng| {
        let n = rng.random_range(2..=top);
        // diamond: bottom → left, right → top, all inside 𝕂ⁿ
        let u = crate::sample::random_unitary(rng, field, n);
        let k = rng.random_range(0..n);
        let left_dim = rng.random_range(k..=n);
        let right_dim = rng.random_range(k..=n);
        let bottom = u.submatrix(0..n, 0..k);
        let mut left_cols = bottom.columns();
        let extra = u.submatrix(0..n, k..n).columns();
        left_cols.extend(extra.iter().take(left_dim - k).cloned());
        let mut right_cols = bottom.columns();
        right_cols.extend(extra.iter().rev().take(right_dim - k).cloned());
        let left = Matrix::from_columns(field, n, &left_cols).unwrap();
        let right = Matrix::from_columns(field, n, &right_cols).unwrap();
        let nodes = vec![
            ("bottom".to_string(), k),
            ("left".to_string(), left_dim),
            ("right".to_string(), right_dim),
            ("top".to_string(), n),
        ];
        let edges = vec![
            ("bottom".to_string(), "left".to_string(), &left.dagger() * &bottom),
            ("bottom".to_string(), "right".to_string(), &right.dagger() * &bottom),
            ("left".to_string(), "top".to_string(), left.clone()),
            ("right".to_string(), "top".to_string(), right.clone()),
        ];
        let d = DirectedDiagram::new(field, nodes, edges).map_err(|e| e.to_string())?;
        let c = d.colimit(tol).map_err(|e| e.to_string())?;
        if c.apex_node != "top" || c.apex.dim != n {
            return Err(format!("apex {} of dim {}", c.apex_node, c.apex.dim));
        }
        let bottom_leg = &c.legs.iter().find(|(name, _)| name == "bottom").unwrap().1;
        let commute = bottom_leg.max_abs_diff(&bottom);
        // a second cocone into 𝕂^{n+1}
        let w = random_matrix(rng, field, n + 1, n);
        let other: Vec<(String, Morphism)> = c.legs.iter().map(|(name, leg)| (name.clone(), &w * leg)).collect();
        let mediator = c.mediate(&other, 1e-8).map_err(|e| e.to_string())?;
        Ok(commute.max(mediator.max_abs_diff(&w) / w.max_abs().max(1.0)))
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

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn l2_examples() {
        let (obj, fam) = l2(&labels(&["a"]), FieldTag::R).unwrap();
        assert_eq!(obj, FdObject::generator(FieldTag::R));
        assert_eq!(fam.members()[0].get(0, 0), Quat::ONE);
        let (obj, fam) = l2(&labels(&["a", "b", "c"]), FieldTag::H).unwrap();
        assert_eq!(obj.dim, 3);
        assert_eq!(family_to_mono(&fam), Matrix::identity(FieldTag::H, 3));
        let inc = inclusion(&labels(&["a"]), &labels(&["a", "b"]), FieldTag::R).unwrap();
        assert_eq!(inc, Matrix::from_real_rows(FieldTag::R, &[&[1.0], &[0.0]]));
        assert!(inc.isometry_defect() == 0.0);
        assert!(l2(&labels(&["a", "a"]), FieldTag::R).is_err());
    }

    #[test]
    fn family_mono_round_trip() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = Matrix::column_vector(FieldTag::C, &[Quat::real(s), Quat::complex(0.0, s)]);
        let fam = OrthonormalFamily::new(FdObject::new(FieldTag::C, 2), labels(&["x"]), vec![v.clone()], 1e-10).unwrap();
        let m = family_to_mono(&fam);
        assert_eq!(m, v);
        assert!(crate::dagcat::is_dagger_mono(&m, 1e-12));
        let back = OrthonormalFamily::from_mono(&m, 1e-10).unwrap();
        assert_eq!(back.members(), fam.members());
        let empty = family_to_mono(&OrthonormalFamily::empty(FdObject::new(FieldTag::R, 3)));
        assert_eq!(empty.shape(), (3, 0));
        let bad = Matrix::from_real_rows(FieldTag::R, &[&[1.0], &[1.0]]);
        assert!(matches!(OrthonormalFamily::from_mono(&bad, 1e-10), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn basis_extension() {
        let h = FdObject::new(FieldTag::R, 3);
        let e1 = OrthonormalFamily::from_mono(&Matrix::basis_vector(FieldTag::R, 3, 0), 1e-12).unwrap();
        let b = orthonormal_basis(h, &e1).unwrap();
        assert_eq!(b.len(), 3);
        let m = family_to_mono(&b);
        assert!(m.unitary_defect() < 1e-12);
        assert_eq!(b.members()[0], e1.members()[0]);
        let again = orthonormal_basis(h, &b).unwrap();
        assert_eq!(family_to_mono(&again), m);
        let h2 = FdObject::new(FieldTag::H, 2);
        let b = orthonormal_basis(h2, &OrthonormalFamily::empty(h2)).unwrap();
        assert!(family_to_mono(&b).unitary_defect() < 1e-12);
    }

    #[test]
    fn chain_colimit() {
        let d = DirectedDiagram::chain(FieldTag::R, 3);
        let c = directed_colimit(&d, &tol()).unwrap();
        assert_eq!(c.apex.dim, 3);
        assert_eq!(c.legs[0].1, Matrix::from_real_rows(FieldTag::R, &[&[1.0], &[0.0], &[0.0]]));
        let single = DirectedDiagram::new(FieldTag::C, vec![("x".into(), 2)], vec![]).unwrap();
        let c = single.colimit(&tol()).unwrap();
        assert_eq!(c.legs[0].1, Matrix::identity(FieldTag::C, 2));
    }

    #[test]
    fn undirected_and_noncommuting_rejected() {
        let inj = Matrix::from_real_rows(FieldTag::R, &[&[1.0], &[0.0]]);
        let d = DirectedDiagram::new(
            FieldTag::R,
            vec![("a".into(), 1), ("b".into(), 2), ("c".into(), 2)],
            vec![("a".into(), "b".into(), inj.clone()), ("a".into(), "c".into(), inj.clone())],
        )
        .unwrap();
        assert!(matches!(d.colimit(&tol()), Err(Error::NotDirected(_))));
        let other = Matrix::from_real_rows(FieldTag::R, &[&[0.0], &[1.0]]);
        let swap = Matrix::from_real_rows(FieldTag::R, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let d = DirectedDiagram::new(
            FieldTag::R,
            vec![("a".into(), 1), ("b".into(), 2), ("c".into(), 2)],
            vec![
                ("a".into(), "b".into(), inj.clone()),
                ("a".into(), "c".into(), other),
                ("b".into(), "c".into(), swap),
            ],
        )
        .unwrap();
        assert!(matches!(d.colimit(&tol()), Err(Error::NotDirected(_))));
        let not_mono = Matrix::from_real_rows(FieldTag::R, &[&[2.0], &[0.0]]);
        let d = DirectedDiagram::new(FieldTag::R, vec![("a".into(), 1), ("b".into(), 2)], vec![("a".into(), "b".into(), not_mono)])
            .unwrap();
        assert!(d.colimit(&tol()).is_err());
    }

    #[test]
    fn diagram_json() {
        let text = r#"{"field":"R","nodes":{"a":1,"b":2},
            "adjacency":{"a":[{"to":"b","map":{"field":"R","rows":2,"cols":1,"data":[[[1.0]],[[0.0]]]}}]}}"#;
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.colimit(&tol()).unwrap().apex_node, "b");
        assert!(parse_diagram(r#"{"field":"R","nodes":{"a":1},"adjacency":{"a":[{"to":"z","map":{"field":"R","rows":1,"cols":1,"data":[[[1.0]]]}}]}}"#).is_err());
        assert_eq!(parse_labels(r#"["x","y"]"#).unwrap().len(), 2);
        assert!(parse_labels(r#"["x","x"]"#).is_err());
    }

    #[test]
    fn hom_functor_examples() {
        let k = hom_functor(FdObject::generator(FieldTag::C));
        let a = Matrix::scalar(Scalar::new(FieldTag::C, Quat::complex(1.0, 2.0)));
        assert_eq!(k.inner(&a, &a).unwrap().value(), Quat::real(5.0));
        let f = Matrix::from_real_rows(FieldTag::R, &[&[2.0, 0.0], &[0.0, 3.0]]);
        let mut rng = rng_for("hom", 0);
        for _ in 0..10 {
            let h1 = random_matrix(&mut rng, FieldTag::R, 2, 1);
            let h2 = random_matrix(&mut rng, FieldTag::R, 2, 1);
            let l = Matrix::inner(&hom_map(&f).adjoint().apply(&h2).unwrap(), &h1).unwrap();
            let r = Matrix::inner(&h2, &hom_map(&f).apply(&h1).unwrap()).unwrap();
            assert!((l - r).norm() < 1e-12);
        }
    }

    #[test]
    fn fullness_examples() {
        let mut rng = rng_for("full", 0);
        let u = crate::sample::random_unitary(&mut rng, FieldTag::C, 3);
        let r = full_via_unitaries(&u, &tol(), false).unwrap();
        assert_eq!(r.decomposition.as_ref().unwrap().terms.len(), 1);
        assert!(r.t.max_abs_diff(&u) < 1e-12);

        let t = Matrix::identity(FieldTag::C, 2).scale(0.3);
        let r = full_via_unitaries(&t, &tol(), false).unwrap();
        assert!(r.residual <= 1e-8);
        // the skew part is zero and its two terms are dropped
        assert_eq!(r.decomposition.unwrap().terms.len(), 2);

        for field in FieldTag::ALL {
            let t = random_matrix(&mut rng, field, 2, 3);
            let r = full_via_unitaries(&t, &tol(), false).unwrap();
            assert!(r.residual <= 1e-8, "{field}: {:e}", r.residual);
            assert!(r.reductions[0].starts_with("dagger"));
            let t = random_matrix(&mut rng, field, 3, 3);
            let r = full_via_unitaries(&t, &tol(), false).unwrap();
            assert!(r.residual <= 1e-8, "{field}: {:e}", r.residual);
        }
        let direct = full_via_unitaries(&t, &tol(), true).unwrap();
        assert_eq!(direct.t, t);
    }

    #[test]
    fn faithful_separation() {
        let f = Matrix::from_real_rows(FieldTag::R, &[&[1.0, 0.0], &[0.0, 1.0]]);
        let mut g = f.clone();
        g.set(0, 0, Quat::real(5.0));
        assert_eq!(separate(&f, &g, &tol()), Some(0));
        let z = Matrix::zeros(FieldTag::R, 2, 2);
        assert_eq!(separate(&z, &z, &tol()), None);
    }

    #[test]
    fn gram_orthonormalize_three_dims() {
        let mut rng = rng_for("eso", 0);
        for field in FieldTag::ALL {
            let g = random_gram(&mut rng, field, 3);
            let c = gram_orthonormalize(&g).unwrap();
            assert!((&(&c.dagger() * &g) * &c).max_abs_diff(&Matrix::identity(field, 3)) < 1e-10);
        }
    }

    #[test]
    fn equivalence_reports_pass() {
        for field in FieldTag::ALL {
            for r in verify_equivalence(field, &[0, 1, 2, 3, 5], 25, 11, &tol()) {
                assert!(r.pass(), "{} {field}: {:?}", r.check, r.failures);
            }
            let r = check_directed_colimits(field, &[1, 4, 6], 25, 11, &tol());
            assert!(r.pass(), "{field}: {:?}", r.failures);
        }
    }
}
