//! Bounded operators as linear combinations of unitaries.
//!
//! Over ℂ at most four unitaries are needed. Over ℝ and ℍ the space is
//! split as `H₁ ⊕ H₁` along the spectrum of `|I − T|`, which needs an even
//! dimension, and at most five unitaries appear.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, hermitian_function, operator_norm, polar, real_representation, sqrt_psd, Matrix};
use crate::scalars::{FieldTag, Quat, Scalar, StructureOps};
use crate::report::{run_trials, Report};
use crate::sample::random_matrix;
use crate::tolerance::ToleranceProfile;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Scalar,
    pub factor: Matrix,
}

#[derive(Debug, Clone)]
pub struct UnitaryDecomposition {
    pub field: FieldTag,
    pub terms: Vec<Term>,
    pub source_norm: f64,
    pub diagnostics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl UnitaryDecomposition {
    fn new(field: FieldTag, source_norm: f64) -> UnitaryDecomposition {
        UnitaryDecomposition {
            field,
            terms: Vec::new(),
            source_norm,
            diagnostics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, coeff: Scalar, factor: Matrix) {
        self.terms.push(Term { coeff, factor });
    }

    /// `Σ αᵢ Uᵢ`, or `None` for an empty list.
    pub fn reconstruct(&self) -> Option<Matrix> {
        let mut it = self.terms.iter().map(|t| t.factor.scale_left(t.coeff.value()));
        let first = it.next()?;
        Some(it.fold(first, |acc, m| &acc + &m))
    }

    pub fn residual(&self, target: &Matrix) -> f64 {
        match self.reconstruct() {
            Some(m) => m.max_abs_diff(target),
            None => target.max_abs(),
        }
    }

    pub fn max_factor_defect(&self) -> f64 {
        self.terms.iter().map(|t| t.factor.unitary_defect()).fold(0.0, f64::max)
    }

    /// Largest deviation of a factor's real representation from commuting
    /// with right multiplication by `i` and `j`. Zero outside ℍ.
    pub fn max_quaternionic_linearity_defect(&self) -> f64 {
        if self.field != FieldTag::H {
            return 0.0;
        }
        self.terms.iter().map(|t| quaternionic_linearity_defect(&t.factor)).fold(0.0, f64::max)
    }

    pub fn bound(&self) -> usize {
        term_bound(self.field)
    }
}

pub fn term_bound(field: FieldTag) -> usize {
    match field {
        FieldTag::C => 4,
        FieldTag::R | FieldTag::H => 5,
    }
}

/// `‖ρ(F)X − Xρ(F)‖` over the structure operators `X ∈ {R_i, R_j}`.
pub fn quaternionic_linearity_defect(f: &Matrix) -> f64 {
    if !f.is_square() {
        return f64::INFINITY;
    }
    let rep = real_representation(f);
    let ops = StructureOps::right_multiplication_quaternionic(f.rows());
    let mut worst = 0.0f64;
    for x in std::iter::once(&ops.s).chain(ops.t.as_ref()) {
        worst = worst.max((&rep * x).max_abs_diff(&(x * &rep)));
    }
    worst
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecomposeOptions {
    /// Odd real/quaternionic dimension: decompose `T ⊕ [0]` and strip the
    /// padding from every factor.
    pub pad: bool,
}

fn check_square(t: &Matrix) -> Result<()> {
    if !t.is_square() {
        return Err(Error::Shape(format!("expected a square operator, got {}x{}", t.rows(), t.cols())));
    }
    Ok(())
}

fn already_unitary(t: &Matrix, tol: &ToleranceProfile) -> Option<UnitaryDecomposition> {
    let defect = t.unitary_defect();
    if t.rows() > 0 && defect <= tol.unitary {
        let mut d = UnitaryDecomposition::new(t.field(), 1.0);
        d.push(Scalar::one(t.field()), t.clone());
        d.diagnostics.insert("input_unitary_defect".into(), defect);
        Some(d)
    } else {
        None
    }
}

/// `T = ½(T+T†) + (1/2i)(iT − iT†)`; each self-adjoint part `S′` becomes
/// `‖S′‖(S + iR) + ‖S′‖(S − iR)` with `S = S′/(2‖S′‖)`, `R = √(I − S²)`.
pub fn decompose_complex(t: &Matrix, tol: &ToleranceProfile) -> Result<UnitaryDecomposition> {
    if t.field() != FieldTag::C {
        return Err(Error::FieldMismatch { expected: FieldTag::C, found: t.field() });
    }
    check_square(t)?;
    if let Some(d) = already_unitary(t, tol) {
        return Ok(d);
    }
    let n = t.rows();
    let mut out = UnitaryDecomposition::new(FieldTag::C, operator_norm(t));
    if t.is_zero() {
        return Ok(out);
    }
    let i = Quat::I;
    let td = t.dagger();
    let s1 = t + &td;
    let s2 = (t - &td).scale_left(i);
    let half = Scalar::new(FieldTag::C, Quat::real(0.5));
    let minus_i_half = Scalar::new(FieldTag::C, Quat::complex(0.0, -0.5));
    let split = (&s1.scale_left(half.value()) + &s2.scale_left(minus_i_half.value())).max_abs_diff(t);
    out.diagnostics.insert("split_exactness".into(), split);

    let id = Matrix::identity(FieldTag::C, n);
    let mut commute = 0.0f64;
    for (part, outer) in [(s1, half), (s2, minus_i_half)] {
        let norm = operator_norm(&part);
        if norm <= tol.exact * t.max_abs().max(1.0) {
            continue;
        }
        let s = part.scale(0.5 / norm);
        let r = sqrt_psd(&(&id - &(&s * &s)), tol.psd)?;
        commute = commute.max((&r * &s).max_abs_diff(&(&s * &r)));
        let ir = r.scale_left(i);
        let coeff = Scalar::new(FieldTag::C, outer.value() * Quat::real(norm));
        out.push(coeff, &s + &ir);
        out.push(coeff, &s - &ir);
    }
    out.diagnostics.insert("commutation_rs".into(), commute);
    Ok(out)
}

/// Real and quaternionic case. `T/c = I − U S` with `c = 2‖T‖` and
/// `I − T/c = U S` a polar decomposition; in an eigenbasis `V` of `S`
/// split into two equal halves, `S ≈ V (A+B ⊕ A−B) V†` and
///
/// `A ⊕ A = (a/2)(W₁ + W₂)`, `B ⊕ −B = (b/2)(W₃ + W₄)`
///
/// with `W₁,₂ = [[Â, ±C], [∓C, Â]]`, `W₃,₄ = [[B̂, ±D], [±D, −B̂]]`,
/// `C = √(I − Â²)`, `D = √(I − B̂²)`.
fn decompose_split(t: &Matrix, tol: &ToleranceProfile) -> Result<UnitaryDecomposition> {
    let field = t.field();
    let n = t.rows();
    if t.is_zero() {
        return Err(Error::ZeroOperator);
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension { dim: n });
    }
    let norm = operator_norm(t);
    let mut out = UnitaryDecomposition::new(field, norm);
    let c = 2.0 * norm;
    let scaled = t.scale(1.0 / c);
    let id = Matrix::identity(field, n);
    let p = polar(&(&id - &scaled))?;
    out.diagnostics
        .insert("polar_residual".into(), (&p.unitary * &p.positive).max_abs_diff(&(&id - &scaled)));

    let spectrum = eigh(&p.positive)?;
    let v = spectrum.vectors;
    let m = &(&v.dagger() * &p.positive) * &v;
    let h = n / 2;
    let m11 = m.submatrix(0..h, 0..h);
    let m22 = m.submatrix(h..n, h..n);
    out.diagnostics.insert("block_drop".into(), m.submatrix(0..h, h..n).max_abs());
    let a = (&m11 + &m22).scale(0.5);
    let b = (&m11 - &m22).scale(0.5);
    let (a, b) = (symmetrize(&a), symmetrize(&b));

    let uv = &p.unitary * &v;
    let vd = v.dagger();
    let lift = |w: &Matrix| -> Matrix { &(&uv * w) * &vd };
    out.push(Scalar::real(field, c), id.clone());

    let a_norm = operator_norm(&a);
    let b_norm = operator_norm(&b);
    let blocks = |x: &Matrix, xn: f64, swap_sign: bool| -> Result<[Matrix; 2]> {
        let hat = x.scale(1.0 / xn);
        // 1 − e² at rounding level is zero; its square root would be √ε
        let root = hermitian_function(&hat, |e| {
            let gap = 1.0 - e * e;
            if gap <= 8.0 * f64::EPSILON { 0.0 } else { gap.sqrt() }
        })?;
        let neg = root.scale(-1.0);
        let w = |sign: &Matrix, other: &Matrix| -> Result<Matrix> {
            if swap_sign {
                Matrix::block2(&hat, sign, sign, &hat.scale(-1.0))
            } else {
                Matrix::block2(&hat, sign, other, &hat)
            }
        };
        Ok([w(&root, &neg)?, w(&neg, &root)?])
    };
    for w in blocks(&a, a_norm, false)? {
        out.push(Scalar::real(field, -c * a_norm / 2.0), lift(&w));
    }
    if b_norm > tol.exact {
        for w in blocks(&b, b_norm, true)? {
            out.push(Scalar::real(field, -c * b_norm / 2.0), lift(&w));
        }
    } else {
        out.notes.push("S is a scalar multiple of I on the split; B terms omitted".into());
    }
    Ok(out)
}

fn symmetrize(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.field(), m.rows(), m.cols(), |i, j| (m.get(i, j) + m.get(j, i).conj()).scale(0.5))
}

fn decompose_even_or_padded(
    t: &Matrix,
    tol: &ToleranceProfile,
    opts: DecomposeOptions,
) -> Result<UnitaryDecomposition> {
    check_square(t)?;
    if let Some(d) = already_unitary(t, tol) {
        return Ok(d);
    }
    let n = t.rows();
    if n.is_multiple_of(2) || !opts.pad {
        return decompose_split(t, tol);
    }
    let padded = t.direct_sum(&Matrix::zeros(t.field(), 1, 1))?;
    let mut d = decompose_split(&padded, tol)?;
    for term in &mut d.terms {
        term.factor = term.factor.submatrix(0..n, 0..n);
    }
    let loss = d.max_factor_defect();
    d.diagnostics.insert("padding_unitarity_loss".into(), loss);
    d.notes.push(format!(
        "odd dimension {n} padded to {}; stripped factors deviate from unitary by {loss:e}",
        n + 1
    ));
    Ok(d)
}

pub fn decompose_real(t: &Matrix, tol: &ToleranceProfile, opts: DecomposeOptions) -> Result<UnitaryDecomposition> {
    if t.field() != FieldTag::R {
        return Err(Error::FieldMismatch { expected: FieldTag::R, found: t.field() });
    }
    decompose_even_or_padded(t, tol, opts)
}

pub fn decompose_quaternionic(
    t: &Matrix,
    tol: &ToleranceProfile,
    opts: DecomposeOptions,
) -> Result<UnitaryDecomposition> {
    if t.field() != FieldTag::H {
        return Err(Error::FieldMismatch { expected: FieldTag::H, found: t.field() });
    }
    let mut d = decompose_even_or_padded(t, tol, opts)?;
    let lin = d.max_quaternionic_linearity_defect();
    d.diagnostics.insert("quaternionic_linearity".into(), lin);
    Ok(d)
}

/// Dispatches on the field tag and fills in the shared diagnostics.
pub fn decompose(t: &Matrix, tol: &ToleranceProfile, opts: DecomposeOptions) -> Result<UnitaryDecomposition> {
    let mut d = match t.field() {
        FieldTag::C => decompose_complex(t, tol)?,
        FieldTag::R => decompose_real(t, tol, opts)?,
        FieldTag::H => decompose_quaternionic(t, tol, opts)?,
    };
    let residual = d.residual(t);
    let defect = d.max_factor_defect();
    d.diagnostics.insert("reconstruction".into(), residual);
    d.diagnostics.insert("max_factor_unitary_defect".into(), defect);
    d.diagnostics.insert("term_count".into(), d.terms.len() as f64);
    d.diagnostics.insert("term_bound".into(), d.bound() as f64);
    Ok(d)
}

/// `{"input": matrix, "terms": [{"coeff", "factor"}], "residual": r}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub input: Matrix,
    pub field: FieldTag,
    pub terms: Vec<Term>,
    pub residual: f64,
    pub term_count: usize,
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DecompositionJson {
    pub fn new(input: &Matrix, d: &UnitaryDecomposition) -> DecompositionJson {
        DecompositionJson {
            input: input.clone(),
            field: d.field,
            terms: d.terms.clone(),
            residual: d.residual(input),
            term_count: d.terms.len(),
            diagnostics: d.diagnostics.clone(),
            notes: d.notes.clone(),
        }
    }
}

/// Decomposes sampled Gaussian operators and checks the term bound, factor
/// unitarity, reconstruction, and for ℍ the linearity of every factor. Odd
/// dimensions are raised by one over ℝ and ℍ.
pub fn check_decompositions(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "appendix.unitary_decomposition",
        "bounded operators are linear combinations of unitaries",
        Some(field),
        tol.reconstruct,
    );
    let dims: Vec<usize> = dims
        .iter()
        .map(|&d| {
            let d = d.max(1);
            if field != FieldTag::C && d % 2 == 1 { d + 1 } else { d }
        })
        .collect();
    if field != FieldTag::C {
        r.note("odd dimensions are sampled as the next even dimension");
    }
    let mut max_terms = 0usize;
    let mut worst_defect = 0.0f64;
    run_trials(&mut r, seed, trials, |rng| {
        let n = dims[rng.random_range(0..dims.len())];
        let t = random_matrix(rng, field, n, n);
        let d = decompose(&t, tol, DecomposeOptions::default()).map_err(|e| e.to_string())?;
        max_terms = max_terms.max(d.terms.len());
        let defect = d.max_factor_defect();
        worst_defect = worst_defect.max(defect);
        if d.terms.len() > d.bound() {
            return Err(format!("{} terms exceed the bound {}", d.terms.len(), d.bound()));
        }
        if defect > tol.unitary {
            return Err(format!("factor unitary defect {defect:e}"));
        }
        let lin = d.max_quaternionic_linearity_defect();
        if lin > tol.reconstruct {
            return Err(format!("factor is not quaternion-linear ({lin:e})"));
        }
        if let Some(&c) = d.diagnostics.get("commutation_rs") {
            if c > tol.commute {
                return Err(format!("R and S fail to commute ({c:e})"));
            }
        }
        Ok(d.residual(&t))
    });
    r.metric("max_terms", max_terms as f64);
    r.metric("term_bound", term_bound(field) as f64);
    r.metric("max_factor_unitary_defect", worst_defect);
    if field != FieldTag::C {
        r.note("the bound of five terms is a property of this construction, not a proven minimum");
    }
    r
}
