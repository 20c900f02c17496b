//! Gram–Schmidt orthonormalization and the subspaces built from it.
//!
//! Projections are taken with right scalar coefficients, `v ← v − q·(q†v)`,
//! which is the correct order over ℍ.

use crate::linalg::Matrix;
use crate::scalars::{FieldTag, Quat};

/// Orthonormalized columns plus which inputs survived.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    pub isometry: Matrix,
    pub rank: usize,
    /// Indices of the input columns that produced each output column.
    pub kept: Vec<usize>,
}

type Col = Vec<Quat>;

fn col_norm(v: &[Quat]) -> f64 {
    v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// `q†v`
fn dot(q: &[Quat], v: &[Quat]) -> Quat {
    q.iter().zip(v).fold(Quat::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

/// `v ← v − q·c`
fn axpy(v: &mut [Quat], q: &[Quat], c: Quat) {
    for (vi, qi) in v.iter_mut().zip(q) {
        *vi -= *qi * c;
    }
}

fn project_out(v: &mut [Quat], basis: &[Col]) {
    for q in basis {
        let c = dot(q, v);
        axpy(v, q, c);
    }
}

fn columns_of(a: &Matrix) -> Vec<Col> {
    (0..a.cols()).map(|j| (0..a.rows()).map(|i| a.get(i, j)).collect()).collect()
}

fn assemble(field: FieldTag, rows: usize, basis: &[Col]) -> Matrix {
    Matrix::from_fn(field, rows, basis.len(), |i, j| basis[j][i])
}

/// Modified Gram–Schmidt with one reorthogonalization pass, keeping input
/// order. A column is dropped when its residual falls to
/// `drop_tol · ‖input column‖` or below.
pub fn gram_schmidt(a: &Matrix, drop_tol: f64) -> GramSchmidt {
    let mut basis: Vec<Col> = Vec::new();
    let mut kept = Vec::new();
    for (idx, mut v) in columns_of(a).into_iter().enumerate() {
        let original = col_norm(&v);
        if original == 0.0 || !original.is_finite() {
            continue;
        }
        project_out(&mut v, &basis);
        project_out(&mut v, &basis);
        let n = col_norm(&v);
        if n <= drop_tol * original {
            continue;
        }
        v.iter_mut().for_each(|q| *q = q.scale(1.0 / n));
        basis.push(v);
        kept.push(idx);
    }
    GramSchmidt { isometry: assemble(a.field(), a.rows(), &basis), rank: basis.len(), kept }
}

/// Column-pivoted Gram–Schmidt: always orthonormalizes the largest
/// remaining residual next. Stops once every residual is at most
/// `drop_tol · (largest input norm)`, or after `max_rank` columns.
pub fn pivoted_gram_schmidt(a: &Matrix, drop_tol: f64, max_rank: Option<usize>) -> GramSchmidt {
    let mut residuals = columns_of(a);
    let scale = residuals.iter().map(|c| col_norm(c)).fold(0.0, f64::max);
    let limit = max_rank.unwrap_or(usize::MAX).min(a.rows()).min(a.cols());
    let mut basis: Vec<Col> = Vec::new();
    let mut kept = Vec::new();
    let mut used = vec![false; residuals.len()];
    while basis.len() < limit && scale > 0.0 {
        let (best, best_norm) = residuals
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, c)| (i, col_norm(c)))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || best_norm <= drop_tol * scale {
            break;
        }
        used[best] = true;
        let mut v = residuals[best].clone();
        project_out(&mut v, &basis);
        let n = col_norm(&v);
        if n == 0.0 {
            break;
        }
        v.iter_mut().for_each(|q| *q = q.scale(1.0 / n));
        for (i, r) in residuals.iter_mut().enumerate() {
            if !used[i] {
                let c = dot(&v, r);
                axpy(r, &v, c);
            }
        }
        basis.push(v);
        kept.push(best);
    }
    GramSchmidt { isometry: assemble(a.field(), a.rows(), &basis), rank: basis.len(), kept }
}

/// Extends an isometry `n × k` to a unitary `n × n` whose first `k` columns
/// are the input. Each new column is the first standard basis vector whose
/// complement projection is nonzero, normalized.
pub fn complete_basis(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut basis = columns_of(m);
    // Some e_i always has ‖P⊥ e_i‖ ≥ 1/√n while the complement is nonzero.
    let threshold = 0.5 / (n.max(1) as f64).sqrt();
    let mut i = 0;
    while basis.len() < n && i < n {
        let mut v = vec![Quat::ZERO; n];
        v[i] = Quat::ONE;
        project_out(&mut v, &basis);
        project_out(&mut v, &basis);
        let norm = col_norm(&v);
        if norm > threshold {
            v.iter_mut().for_each(|q| *q = q.scale(1.0 / norm));
            basis.push(v);
        }
        i += 1;
    }
    assemble(m.field(), n, &basis)
}

/// Isometry whose range is the row space `(ker A)⊥`.
fn row_space(a: &Matrix, drop_tol: f64) -> Matrix {
    pivoted_gram_schmidt(&a.dagger(), drop_tol, None).isometry
}

/// Isometry whose range is `ker A`.
pub fn nullspace(a: &Matrix, drop_tol: f64) -> Matrix {
    let rows = row_space(a, drop_tol);
    let r = rows.cols();
    let full = complete_basis(&rows);
    full.submatrix(0..a.cols(), r..a.cols())
}

/// Isometry whose range is `im A`. Its column count equals
/// `cols(A) − cols(nullspace(A))`.
pub fn range_basis(a: &Matrix, drop_tol: f64) -> Matrix {
    let rows = row_space(a, drop_tol);
    let image = a * &rows;
    let r = rows.cols();
    let gs = pivoted_gram_schmidt(&image, 1e-14, Some(r));
    if gs.rank == r {
        return gs.isometry;
    }
    // Degenerate image columns: fill up to the row rank so rank–nullity
    // stays exact in the reported column counts.
    let completed = complete_basis(&gs.isometry);
    completed.submatrix(0..a.rows(), 0..r)
}
