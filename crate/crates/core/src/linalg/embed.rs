//! Representations of quaternionic matrices by complex and real ones.
//!
//! Writing `A = A₁ + A₂ j` with `A₁, A₂` complex, the adjoint embedding is
//!
//! ```text
//!        ⎡  A₁        A₂     ⎤
//! χ(A) = ⎣ −conj(A₂)  conj(A₁) ⎦
//! ```
//!
//! which is multiplicative and commutes with the dagger. A quaternionic
//! column `v₁ + v₂ j` corresponds to the complex column `[v₁; −conj(v₂)]`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{FieldTag, Quat};

fn c(re: f64, im: f64) -> Quat {
    Quat::complex(re, im)
}

/// `2n × 2m` complex matrix representing an `n × m` quaternionic one.
/// Real and complex inputs are treated as quaternionic.
pub fn embed_complex(a: &Matrix) -> Matrix {
    let (n, m) = a.shape();
    Matrix::from_fn(FieldTag::C, 2 * n, 2 * m, |i, j| {
        let q = a.get(i % n.max(1), j % m.max(1));
        let ((a1r, a1i), (a2r, a2i)) = q.to_complex_pair();
        match (i < n, j < m) {
            (true, true) => c(a1r, a1i),
            (true, false) => c(a2r, a2i),
            (false, true) => c(-a2r, a2i),
            (false, false) => c(a1r, -a1i),
        }
    })
}

/// Distance of a `2n × 2m` complex matrix from the image of the embedding.
pub fn quaternionic_defect(m: &Matrix) -> f64 {
    if !m.rows().is_multiple_of(2) || !m.cols().is_multiple_of(2) {
        return f64::INFINITY;
    }
    let (n, k) = (m.rows() / 2, m.cols() / 2);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..k {
            let x = m.get(i, j);
            let y = m.get(i, j + k);
            let z = m.get(i + n, j);
            let w = m.get(i + n, j + k);
            // z = −conj(y), w = conj(x)
            worst = worst.max((z + y.conj()).norm()).max((w - x.conj()).norm());
        }
    }
    worst
}

/// Inverse of [`embed_complex`] on its image, averaging the redundant
/// blocks. Fails when the input is further than `tol` from the image.
pub fn unembed(m: &Matrix, tol: f64) -> Result<Matrix> {
    let defect = quaternionic_defect(m);
    if !(defect <= tol) {
        return Err(Error::NotQuaternionic { residual: defect });
    }
    let (n, k) = (m.rows() / 2, m.cols() / 2);
    Ok(Matrix::from_fn(FieldTag::H, n, k, |i, j| {
        let x = m.get(i, j);
        let y = m.get(i, j + k);
        let z = m.get(i + n, j);
        let w = m.get(i + n, j + k);
        let a1 = (x + w.conj()).scale(0.5);
        let a2 = (y - z.conj()).scale(0.5);
        Quat::from_complex_pair((a1.w, a1.x), (a2.w, a2.x))
    }))
}

/// Complex column `[v₁; −conj(v₂)]` back to the quaternionic `v₁ + v₂ j`.
pub(crate) fn quaternion_column_from_complex(col: &[Quat]) -> Vec<Quat> {
    let n = col.len() / 2;
    (0..n)
        .map(|i| {
            let a = col[i];
            let b = col[i + n].conj().scale(-1.0);
            Quat::from_complex_pair((a.w, a.x), (b.w, b.x))
        })
        .collect()
}

/// 4×4 real matrix of `p ↦ f(p)` for a real-linear map on ℍ ≅ ℝ⁴.
pub(crate) fn real_matrix_of(f: impl Fn(Quat) -> Quat) -> [[f64; 4]; 4] {
    let basis = [Quat::ONE, Quat::I, Quat::J, Quat::K];
    let mut out = [[0.0; 4]; 4];
    for (col, b) in basis.iter().enumerate() {
        let image = f(*b).components();
        for row in 0..4 {
            out[row][col] = image[row];
        }
    }
    out
}

/// Real `4n × 4m` matrix of the ℝ-linear map `v ↦ A v`, with each
/// quaternion stored as its `(w, x, y, z)` components.
pub fn real_representation(a: &Matrix) -> Matrix {
    let (n, m) = a.shape();
    let blocks: Vec<[[f64; 4]; 4]> =
        a.data().iter().map(|&q| real_matrix_of(|p| q * p)).collect();
    Matrix::from_fn(FieldTag::R, 4 * n, 4 * m, |i, j| {
        Quat::real(blocks[(i / 4) * m + j / 4][i % 4][j % 4])
    })
}
