//! Hermitian eigendecomposition and the functional calculus built on it.
//!
//! Real and complex matrices are diagonalized by cyclic Jacobi rotations.
//! Quaternionic matrices go through the adjoint embedding: the complex
//! eigenvectors are pulled back to quaternionic columns and deduplicated,
//! and matrix functions are computed on the embedded matrix and unembedded.

use crate::error::{Error, Result};
use crate::linalg::embed::{embed_complex, quaternion_column_from_complex, unembed};
use crate::linalg::{complete_basis, Matrix};
use crate::scalars::{FieldTag, Quat};

/// `A = V diag(values) V†`, values ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigh {
    pub fn reconstruct(&self) -> Matrix {
        let d = Matrix::from_fn(self.vectors.field(), self.values.len(), self.values.len(), |i, j| {
            if i == j {
                Quat::real(self.values[i])
            } else {
                Quat::ZERO
            }
        });
        &(&self.vectors * &d) * &self.vectors.dagger()
    }
}

const MAX_SWEEPS: usize = 100;

fn check_hermitian(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let scale = a.max_abs().max(1.0);
    let defect = a.self_adjoint_defect();
    if !(defect <= 1e-10 * scale) {
        return Err(Error::NotSelfAdjoint { residual: defect });
    }
    Ok(())
}

/// Cyclic Jacobi directly on the entries, valid over ℝ, ℂ and ℍ.
///
/// Each pivot `(p, q)` is first rotated to a real off-diagonal entry by the
/// diagonal unitary `diag(1, conj(b)/|b|)` and then annihilated by a real
/// Givens rotation.
pub fn eigh_native(a: &Matrix) -> Result<Eigh> {
    check_hermitian(a)?;
    let n = a.rows();
    let field = a.field();
    let mut m: Vec<Vec<Quat>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    // symmetrize
    for i in 0..n {
        m[i][i] = Quat::real(m[i][i].w);
        for j in 0..i {
            let avg = (m[i][j] + m[j][i].conj()).scale(0.5);
            m[i][j] = avg;
            m[j][i] = avg.conj();
        }
    }
    let mut v: Vec<Vec<Quat>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Quat::ONE } else { Quat::ZERO }).collect()).collect();

    let frob = m.iter().flatten().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
    let threshold = 1e-15 * frob;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[p][q];
                let r = b.norm();
                if r <= threshold || r <= 1e-300 {
                    continue;
                }
                rotated = true;
                if field != FieldTag::R || b.w < 0.0 || b.x != 0.0 {
                    let w = b.conj().scale(1.0 / r);
                    let wc = w.conj();
                    for row in m.iter_mut() {
                        row[q] = row[q] * w;
                    }
                    for k in 0..n {
                        m[q][k] = wc * m[q][k];
                    }
                    for row in v.iter_mut() {
                        row[q] = row[q] * w;
                    }
                }
                let app = m[p][p].w;
                let aqq = m[q][q].w;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate_cols(&mut m, p, q, c, s);
                rotate_rows(&mut m, p, q, c, s);
                rotate_cols(&mut v, p, q, c, s);
                m[p][q] = Quat::ZERO;
                m[q][p] = Quat::ZERO;
                m[p][p] = Quat::real(m[p][p].w);
                m[q][q] = Quat::real(m[q][q].w);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].w.total_cmp(&m[j][j].w));
    let values = order.iter().map(|&i| m[i][i].w).collect();
    let vectors = Matrix::from_fn(field, n, n, |i, j| v[i][order[j]]);
    Ok(Eigh { values, vectors })
}

fn rotate_cols(m: &mut [Vec<Quat>], p: usize, q: usize, c: f64, s: f64) {
    for row in m.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp.scale(c) - xq.scale(s);
        row[q] = xp.scale(s) + xq.scale(c);
    }
}

fn rotate_rows(m: &mut [Vec<Quat>], p: usize, q: usize, c: f64, s: f64) {
    let n = m.len();
    for k in 0..n {
        let (xp, xq) = (m[p][k], m[q][k]);
        m[p][k] = xp.scale(c) - xq.scale(s);
        m[q][k] = xp.scale(s) + xq.scale(c);
    }
}

/// Hermitian eigendecomposition. Quaternionic input is diagonalized through
/// the adjoint embedding.
pub fn eigh(a: &Matrix) -> Result<Eigh> {
    if a.field() != FieldTag::H {
        return eigh_native(a);
    }
    check_hermitian(a)?;
    let n = a.rows();
    let complex = eigh_native(&embed_complex(a))?;
    // Each eigenvalue of χ(A) appears twice; the two complex eigenvectors
    // span one quaternionic line. Keep one representative per line.
    let mut basis: Vec<Vec<Quat>> = Vec::with_capacity(n);
    for j in 0..2 * n {
        if basis.len() == n {
            break;
        }
        let col: Vec<Quat> = (0..2 * n).map(|i| complex.vectors.get(i, j)).collect();
        let mut v = quaternion_column_from_complex(&col);
        for _ in 0..2 {
            for b in &basis {
                let c = b.iter().zip(&v).fold(Quat::ZERO, |acc, (x, y)| acc + x.conj() * *y);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= *bi * c;
                }
            }
        }
        let norm = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-4 {
            v.iter_mut().for_each(|q| *q = q.scale(1.0 / norm));
            basis.push(v);
        }
    }
    let partial = Matrix::from_fn(FieldTag::H, n, basis.len(), |i, j| basis[j][i]);
    let vectors = if basis.len() < n { complete_basis(&partial) } else { partial };
    let rayleigh = &(&vectors.dagger() * a) * &vectors;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| rayleigh.get(i, i).w.total_cmp(&rayleigh.get(j, j).w));
    let values = order.iter().map(|&i| rayleigh.get(i, i).w).collect();
    let vectors = Matrix::from_fn(FieldTag::H, n, n, |i, j| vectors.get(i, order[j]));
    Ok(Eigh { values, vectors })
}

/// `f(A)` for Hermitian `A`. Over ℍ this is `unembed(f(χ(A)))`.
pub fn hermitian_function(a: &Matrix, f: impl Fn(f64) -> f64) -> Result<Matrix> {
    let quaternionic = a.field() == FieldTag::H;
    let e = if quaternionic { eigh_native(&embed_complex(a))? } else { eigh_native(a)? };
    let mut values = e.values;
    if quaternionic {
        // the embedded spectrum is doubled; equalize each pair so that f
        // sees identical arguments even where it is not Lipschitz
        for pair in values.chunks_mut(2) {
            let mean = pair.iter().sum::<f64>() / pair.len() as f64;
            pair.iter_mut().for_each(|x| *x = mean);
        }
    }
    let mapped = Eigh { values: values.into_iter().map(f).collect(), vectors: e.vectors };
    let out = mapped.reconstruct();
    // exact Hermitian symmetry
    let out = Matrix::from_fn(out.field(), out.rows(), out.cols(), |i, j| {
        (out.get(i, j) + out.get(j, i).conj()).scale(0.5)
    });
    if quaternionic {
        unembed(&out, 1e-8 * out.max_abs().max(1.0))
    } else {
        Ok(out)
    }
}

/// Positive square root of a positive semidefinite matrix. Eigenvalues in
/// `[−psd_tol, 0)` are clamped to zero.
pub fn sqrt_psd(s: &Matrix, psd_tol: f64) -> Result<Matrix> {
    check_hermitian(s)?;
    let spectrum = eigh(s)?;
    if let Some(&lowest) = spectrum.values.first() {
        if lowest < -psd_tol {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    hermitian_function(s, |x| x.max(0.0).sqrt())
}

/// Largest singular value; zero for empty matrices.
pub fn operator_norm(a: &Matrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = &a.dagger() * a;
    match eigh(&gram) {
        Ok(e) => e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

/// `Q = U·P` with `U` unitary and `P = (Q†Q)^{1/2}`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub unitary: Matrix,
    pub positive: Matrix,
}

/// Polar decomposition of a square invertible matrix. Fails when the
/// smallest singular value is below `1e-10`.
pub fn polar(q: &Matrix) -> Result<Polar> {
    if !q.is_square() {
        return Err(Error::Shape(format!("polar needs a square matrix, got {}x{}", q.rows(), q.cols())));
    }
    let gram = &q.dagger() * q;
    let spectrum = eigh(&gram)?;
    let smallest = spectrum.values.first().copied().unwrap_or(1.0).max(0.0).sqrt();
    if smallest < 1e-10 {
        return Err(Error::Singular { smallest });
    }
    let positive = hermitian_function(&gram, f64::sqrt)?;
    let inv_sqrt = hermitian_function(&gram, |x| 1.0 / x.sqrt())?;
    Ok(Polar { unitary: q * &inv_sqrt, positive })
}
