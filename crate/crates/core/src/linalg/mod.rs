//! Dense matrices over ℝ, ℂ and ℍ.
//!
//! A matrix `rows × cols` is a morphism from the `cols`-dimensional object
//! to the `rows`-dimensional one. Scalars act on column vectors from the
//! right, so `(A v) λ = A (v λ)` holds over ℍ as well.

pub(crate) mod embed;
mod factor;
mod spectral;

pub use embed::{embed_complex, quaternionic_defect, real_representation, unembed};
pub use factor::{
    complete_basis, gram_schmidt, nullspace, pivoted_gram_schmidt, range_basis, GramSchmidt,
};
pub use spectral::{
    eigh, eigh_native, hermitian_function, operator_norm, polar, sqrt_psd, Eigh, Polar,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{FieldTag, Quat, Scalar};

/// Dense matrix, row-major, codomain rows by domain columns.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    field: FieldTag,
    rows: usize,
    cols: usize,
    data: Vec<Quat>,
}

/// A morphism between finite-dimensional objects.
pub type Morphism = Matrix;

/// An element of `C(K, H)`: a single-column matrix.
pub type Vector = Matrix;

fn truncate(field: FieldTag, q: Quat) -> Quat {
    match field {
        FieldTag::R => Quat::real(q.w),
        FieldTag::C => Quat::complex(q.w, q.x),
        FieldTag::H => q,
    }
}

impl Matrix {
    /// Entries outside `field` are truncated to it.
    pub fn new(field: FieldTag, rows: usize, cols: usize, data: Vec<Quat>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let data = data.into_iter().map(|q| truncate(field, q)).collect();
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: FieldTag, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![Quat::ZERO; rows * cols] }
    }

    pub fn identity(field: FieldTag, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| if i == j { Quat::ONE } else { Quat::ZERO })
    }

    pub fn from_fn(
        field: FieldTag,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quat,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(truncate(field, f(i, j)));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Real matrix from nested rows; convenient in tests and examples.
    pub fn from_real_rows(field: FieldTag, rows: &[&[f64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Matrix::from_fn(field, r, c, |i, j| Quat::real(rows[i][j]))
    }

    pub fn from_rows(field: FieldTag, rows: &[Vec<Quat>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix::from_fn(field, r, c, |i, j| rows[i][j]))
    }

    pub fn column_vector(field: FieldTag, entries: &[Quat]) -> Matrix {
        Matrix::from_fn(field, entries.len(), 1, |i, _| entries[i])
    }

    /// `i`-th standard basis vector of `𝕂ⁿ`.
    pub fn basis_vector(field: FieldTag, n: usize, i: usize) -> Matrix {
        Matrix::from_fn(field, n, 1, |r, _| if r == i { Quat::ONE } else { Quat::ZERO })
    }

    /// A 1×1 matrix.
    pub fn scalar(s: Scalar) -> Matrix {
        Matrix { field: s.field(), rows: 1, cols: 1, data: vec![s.value()] }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Quat] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Quat {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quat) {
        self.data[i * self.cols + j] = truncate(self.field, q);
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        Scalar::new(self.field, self.get(i, j))
    }

    /// Same entries viewed in a larger field.
    pub fn promote(&self, field: FieldTag) -> Result<Matrix> {
        if field < self.field {
            return Err(Error::FieldMismatch { expected: field, found: self.field });
        }
        Ok(Matrix { field, ..self.clone() })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { expected: self.field, found: other.field });
        }
        Ok(())
    }

    pub fn try_matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(Quat, Quat) -> Quat) -> Result<Matrix> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(Quat) -> Quat) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| f(self.get(i, j)))
    }

    pub fn scale(&self, r: f64) -> Matrix {
        self.map(|q| q.scale(r))
    }

    /// `λ·A`, each entry multiplied on the left.
    pub fn scale_left(&self, lambda: Quat) -> Matrix {
        self.map(|q| lambda * q)
    }

    /// `A·λ`, each entry multiplied on the right.
    pub fn scale_right(&self, lambda: Quat) -> Matrix {
        self.map(|q| q * lambda)
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.field, self.rows, 1, |i, _| self.get(i, j))
    }

    pub fn columns(&self) -> Vec<Matrix> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Places equal-height columns side by side. `rows` fixes the height when
    /// the list is empty.
    pub fn from_columns(field: FieldTag, rows: usize, cols: &[Matrix]) -> Result<Matrix> {
        for c in cols {
            if c.rows != rows || c.cols != 1 {
                return Err(Error::Shape(format!(
                    "column of shape {}x{} in a {rows}-row matrix",
                    c.rows, c.cols
                )));
            }
            if c.field != field {
                return Err(Error::FieldMismatch { expected: field, found: c.field });
            }
        }
        Ok(Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j].get(i, 0)))
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Shape("hstack of different heights".into()));
        }
        Ok(Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape("vstack of different widths".into()));
        }
        Ok(Matrix::from_fn(self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                other.get(i - self.rows, j)
            }
        }))
    }

    /// `A ⊕ B` as a block-diagonal matrix.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        let (r, c) = (self.rows, self.cols);
        Ok(Matrix::from_fn(self.field, r + other.rows, c + other.cols, |i, j| {
            match (i < r, j < c) {
                (true, true) => self.get(i, j),
                (false, false) => other.get(i - r, j - c),
                _ => Quat::ZERO,
            }
        }))
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn block2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let (r0, c0) = (rows.start, cols.start);
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.max_abs_diff(Quat::ZERO)).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute component difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.max_abs_diff(*b))
            .fold(0.0, f64::max)
    }

    /// `‖A − A†‖` entrywise; infinite when not square.
    pub fn self_adjoint_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    /// `‖A†A − I‖`.
    pub fn isometry_defect(&self) -> f64 {
        (&self.dagger() * self).max_abs_diff(&Matrix::identity(self.field, self.cols))
    }

    /// `‖AA† − I‖`.
    pub fn coisometry_defect(&self) -> f64 {
        (self * &self.dagger()).max_abs_diff(&Matrix::identity(self.field, self.rows))
    }

    pub fn unitary_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.isometry_defect().max(self.coisometry_defect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| q.is_zero())
    }

    /// `⟨u, v⟩ = v†u` for column vectors.
    pub fn inner(u: &Vector, v: &Vector) -> Result<Scalar> {
        u.check_field(v)?;
        if u.cols != 1 || v.cols != 1 || u.rows != v.rows {
            return Err(Error::Shape(format!(
                "inner product of {}x{} and {}x{}",
                u.rows, u.cols, v.rows, v.cols
            )));
        }
        let s = (0..u.rows).fold(Quat::ZERO, |acc, i| acc + v.get(i, 0).conj() * u.get(i, 0));
        Ok(Scalar::new(u.field, s))
    }

    /// Euclidean norm of all entries; for a vector this is `⟨v,v⟩^{1/2}`.
    pub fn norm(&self) -> f64 {
        self.frobenius()
    }

    pub fn trace(&self) -> Quat {
        (0..self.rows.min(self.cols)).fold(Quat::ZERO, |acc, i| acc + self.get(i, i))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{}> {}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    /// Panics on field or shape mismatch; use [`Matrix::try_matmul`] on
    /// untrusted shapes.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_matmul(rhs).expect("matrix product")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|q| -q)
    }
}

/// Wire form: `{"field":…,"rows":n,"cols":m,"data":[[scalar,…],…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub field: FieldTag,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Vec<f64>>>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        let data = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m.entry(i, j).components()).collect())
            .collect();
        MatrixJson { field: m.field, rows: m.rows, cols: m.cols, data }
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Matrix> {
        if j.data.len() != j.rows {
            return Err(Error::Parse(format!("expected {} rows, got {}", j.rows, j.data.len())));
        }
        let mut data = Vec::with_capacity(j.rows.saturating_mul(j.cols));
        for (i, row) in j.data.iter().enumerate() {
            if row.len() != j.cols {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    j.cols
                )));
            }
            for c in row {
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Parse(format!("non-finite entry in row {i}")));
                }
                data.push(Scalar::from_components(j.field, c)?.value());
            }
        }
        Matrix::new(j.field, j.rows, j.cols, data)
    }
}

/// Largest ambient dimension accepted from a subspace or diagram file.
pub const MAX_PARSED_DIM: usize = 1024;

/// Parses the wire form of a single matrix.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let j: MatrixJson = serde_json::from_str(text)?;
    Matrix::try_from(j)
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        Matrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_matrix, rng_for};

    #[test]
    fn dagger_of_i_and_identity() {
        let m = Matrix::scalar(Scalar::new(FieldTag::C, Quat::I));
        assert_eq!(m.dagger().get(0, 0), -Quat::I);
        let id = Matrix::identity(FieldTag::H, 3);
        assert_eq!(id.dagger(), id);
    }

    #[test]
    fn dagger_involution_on_random_quaternionic() {
        let mut rng = rng_for("dagger-involution", 1);
        let a = random_matrix(&mut rng, FieldTag::H, 3, 2);
        assert!(a.dagger().dagger().max_abs_diff(&a) <= 1e-15);
        let b = random_matrix(&mut rng, FieldTag::H, 2, 4);
        let lhs = (&a * &b).dagger();
        let rhs = &b.dagger() * &a.dagger();
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn inner_product_examples() {
        let f = FieldTag::H;
        let e1 = Matrix::basis_vector(f, 2, 0);
        let e2 = Matrix::basis_vector(f, 2, 1);
        assert!(Matrix::inner(&e1, &e2).unwrap().is_zero());
        assert_eq!(Matrix::inner(&e1, &e1).unwrap().value(), Quat::ONE);
        // ⟨u j, v⟩ = v†(u j) = j
        let uj = e1.scale_right(Quat::J);
        assert_eq!(Matrix::inner(&uj, &e1).unwrap().value(), Quat::J);
        assert!(Matrix::inner(&e1, &Matrix::basis_vector(f, 3, 0)).is_err());
    }

    #[test]
    fn right_action_commutes_with_matrices() {
        let mut rng = rng_for("right-action", 2);
        let a = random_matrix(&mut rng, FieldTag::H, 3, 3);
        let v = random_matrix(&mut rng, FieldTag::H, 3, 1);
        let lambda = Quat::new(0.3, -1.0, 0.5, 2.0);
        let lhs = (&a * &v).scale_right(lambda);
        let rhs = &a * &v.scale_right(lambda);
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn json_round_trip_and_rejects() {
        let mut rng = rng_for("json", 3);
        let a = random_matrix(&mut rng, FieldTag::C, 2, 3);
        let s = serde_json::to_string(&a).unwrap();
        let b: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let bad = r#"{"field":"R","rows":2,"cols":1,"data":[[[1.0]]]}"#;
        assert!(serde_json::from_str::<Matrix>(bad).is_err());
        let wrong_width = r#"{"field":"C","rows":1,"cols":1,"data":[[[1.0]]]}"#;
        assert!(serde_json::from_str::<Matrix>(wrong_width).is_err());
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::zeros(FieldTag::R, 2, 3);
        assert!(a.try_matmul(&a).is_err());
        assert!(a.try_add(&Matrix::zeros(FieldTag::C, 2, 3)).is_err());
        assert!(Matrix::new(FieldTag::R, 2, 2, vec![Quat::ONE]).is_err());
    }
}
