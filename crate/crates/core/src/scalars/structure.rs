//! Complex and quaternionic inner products induced on a real inner-product
//! space by skew-adjoint complex structures.
//!
//! Scalars act on the right: `u·i := s u`, `u·j := t u`, hence
//! `u·k = (u·i)·j = t s u`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{FieldTag, Quat, Scalar};

use crate::linalg::embed::real_matrix_of;
use crate::report::{run_trials, Report};
use crate::sample::{random_matrix, random_unitary};
use rand::Rng;

/// Real operators `s` (and `t`) giving a real space complex (quaternionic)
/// structure.
#[derive(Debug, Clone)]
pub struct StructureOps {
    pub s: Matrix,
    pub t: Option<Matrix>,
}

fn block_diagonal(block: [[f64; 4]; 4], size: usize, copies: usize) -> Matrix {
    Matrix::from_fn(FieldTag::R, size * copies, size * copies, |i, j| {
        if i / size == j / size {
            Quat::real(block[i % size][j % size])
        } else {
            Quat::ZERO
        }
    })
}

impl StructureOps {
    pub fn complex(s: Matrix) -> StructureOps {
        StructureOps { s, t: None }
    }

    pub fn quaternionic(s: Matrix, t: Matrix) -> StructureOps {
        StructureOps { s, t: Some(t) }
    }

    /// ℂⁿ ≅ ℝ²ⁿ with `s` = multiplication by `i`.
    pub fn right_multiplication_complex(n: usize) -> StructureOps {
        StructureOps::complex(block_diagonal(real_matrix_of(|p| p * Quat::I), 2, n))
    }

    /// ℍⁿ ≅ ℝ⁴ⁿ with `s`, `t` = right multiplication by `i`, `j`.
    pub fn right_multiplication_quaternionic(n: usize) -> StructureOps {
        StructureOps::quaternionic(
            block_diagonal(real_matrix_of(|p| p * Quat::I), 4, n),
            block_diagonal(real_matrix_of(|p| p * Quat::J), 4, n),
        )
    }

    pub fn field(&self) -> FieldTag {
        if self.t.is_some() {
            FieldTag::H
        } else {
            FieldTag::C
        }
    }

    /// Checks every defining identity against the real inner product with
    /// Gram matrix `gram`, returning the first violation.
    pub fn validate(&self, gram: &Matrix, tol: f64) -> Result<()> {
        let n = gram.rows();
        let fail = |identity: &'static str, residual: f64| -> Result<()> {
            if residual <= tol {
                Ok(())
            } else {
                Err(Error::Structure { identity, residual })
            }
        };
        if gram.field() != FieldTag::R || !gram.is_square() {
            return Err(Error::Shape("Gram matrix must be real and square".into()));
        }
        fail("[u,v] = [v,u]", gram.self_adjoint_defect())?;
        let ops: Vec<&Matrix> = std::iter::once(&self.s).chain(self.t.as_ref()).collect();
        for op in &ops {
            if op.field() != FieldTag::R || op.shape() != (n, n) {
                return Err(Error::Shape(format!(
                    "structure operator must be real {n}x{n}, got {}x{}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        let multiple = self.field().real_dim();
        if !n.is_multiple_of(multiple) {
            return Err(Error::Shape(format!("real dimension {n} is not divisible by {multiple}")));
        }
        let minus_id = Matrix::identity(FieldTag::R, n).scale(-1.0);
        let s = &self.s;
        fail("s² = −1", (s * s).max_abs_diff(&minus_id))?;
        fail("s† = −s", (gram * s).max_abs_diff(&(-&(&s.transpose() * gram))))?;
        if let Some(t) = &self.t {
            fail("t² = −1", (t * t).max_abs_diff(&minus_id))?;
            fail("t† = −t", (gram * t).max_abs_diff(&(-&(&t.transpose() * gram))))?;
            fail("st = −ts", (s * t).max_abs_diff(&(-&(t * s))))?;
        }
        Ok(())
    }
}

fn real_inner(gram: &Matrix, u: &Matrix, v: &Matrix) -> f64 {
    (&(&v.transpose() * gram) * u).get(0, 0).w
}

fn check_vector(gram: &Matrix, u: &Matrix) -> Result<()> {
    if u.field() != FieldTag::R || u.cols() != 1 || u.rows() != gram.rows() {
        return Err(Error::Shape(format!(
            "expected a real {}-vector, got {}x{} over {}",
            gram.rows(),
            u.rows(),
            u.cols(),
            u.field()
        )));
    }
    Ok(())
}

/// `⟨u, v⟩_ℂ = [u,v] − [su,v] i`.
#[derive(Debug, Clone)]
pub struct ComplexForm {
    gram: Matrix,
    s: Matrix,
}

impl ComplexForm {
    pub fn new(gram: Matrix, ops: &StructureOps, tol: f64) -> Result<ComplexForm> {
        if ops.t.is_some() {
            return Err(Error::Domain("complex promotion takes a single structure operator".into()));
        }
        ops.validate(&gram, tol)?;
        Ok(ComplexForm { gram, s: ops.s.clone() })
    }

    pub fn inner(&self, u: &Matrix, v: &Matrix) -> Result<Scalar> {
        check_vector(&self.gram, u)?;
        check_vector(&self.gram, v)?;
        let re = real_inner(&self.gram, u, v);
        let im = -real_inner(&self.gram, &(&self.s * u), v);
        Ok(Scalar::new(FieldTag::C, Quat::complex(re, im)))
    }

    /// `u·λ`.
    pub fn act(&self, u: &Matrix, lambda: Scalar) -> Matrix {
        let q = lambda.value();
        &u.scale(q.w) + &(&self.s * u).scale(q.x)
    }
}

/// `⟨u, v⟩_ℍ = [u,v] − [su,v] i − [tu,v] j − [tsu,v] k`.
#[derive(Debug, Clone)]
pub struct QuaternionicForm {
    gram: Matrix,
    s: Matrix,
    t: Matrix,
}

impl QuaternionicForm {
    pub fn new(gram: Matrix, ops: &StructureOps, tol: f64) -> Result<QuaternionicForm> {
        let t = ops
            .t
            .clone()
            .ok_or_else(|| Error::Domain("quaternionic promotion needs both s and t".into()))?;
        ops.validate(&gram, tol)?;
        Ok(QuaternionicForm { gram, s: ops.s.clone(), t })
    }

    pub fn inner(&self, u: &Matrix, v: &Matrix) -> Result<Scalar> {
        check_vector(&self.gram, u)?;
        check_vector(&self.gram, v)?;
        let su = &self.s * u;
        let tu = &self.t * u;
        let tsu = &self.t * &su;
        let g = &self.gram;
        Ok(Scalar::new(
            FieldTag::H,
            Quat::new(
                real_inner(g, u, v),
                -real_inner(g, &su, v),
                -real_inner(g, &tu, v),
                -real_inner(g, &tsu, v),
            ),
        ))
    }

    /// `u·λ = w u + x su + y tu + z tsu`.
    pub fn act(&self, u: &Matrix, lambda: Scalar) -> Matrix {
        let q = lambda.value();
        let su = &self.s * u;
        let tu = &self.t * u;
        let tsu = &self.t * &su;
        &(&u.scale(q.w) + &su.scale(q.x)) + &(&tu.scale(q.y) + &tsu.scale(q.z))
    }

    /// `([su,u], [tu,u], [stu,u])`, all zero for a valid structure.
    pub fn orthogonality_witnesses(&self, u: &Matrix) -> [f64; 3] {
        let g = &self.gram;
        let su = &self.s * u;
        let tu = &self.t * u;
        let stu = &self.s * &tu;
        [real_inner(g, &su, u), real_inner(g, &tu, u), real_inner(g, &stu, u)]
    }
}

/// Complex promotion of `(ℝⁿ, gram)` along `s`.
pub fn promote_complex(gram: Matrix, ops: &StructureOps, tol: f64) -> Result<ComplexForm> {
    ComplexForm::new(gram, ops, tol)
}

/// Quaternionic promotion of `(ℝⁿ, gram)` along `s`, `t`.
pub fn promote_quaternionic(gram: Matrix, ops: &StructureOps, tol: f64) -> Result<QuaternionicForm> {
    QuaternionicForm::new(gram, ops, tol)
}

/// Real coordinates of a column over ℂ or ℍ: each entry contributes its
/// first `real_dim` components.
pub fn realify(v: &Matrix) -> Matrix {
    let d = v.field().real_dim();
    let mut out = Vec::with_capacity(v.rows() * d);
    for i in 0..v.rows() {
        out.extend(v.get(i, 0).components().iter().take(d).map(|&c| Quat::real(c)));
    }
    Matrix::column_vector(FieldTag::R, &out)
}

/// The promoted inner product on `ℝ^{dn}`, with the structure conjugated
/// by a random rotation, agrees with `v†u` on the corresponding columns;
/// `⟨u,u⟩` is real.
pub fn check_promotion(
    field: FieldTag,
    dims: &[usize],
    trials: u64,
    seed: u64,
    tol: &crate::tolerance::ToleranceProfile,
) -> Report {
    let mut r = Report::new(
        "appendix.promotion",
        "complex structures promote a real inner product to a complex or quaternionic one",
        Some(field),
        tol.ring,
    );
    if field == FieldTag::R {
        r.note("nothing to promote over ℝ");
        return r;
    }
    let top = dims.iter().copied().max().unwrap_or(1).clamp(1, 4);
    run_trials(&mut r, seed, trials, |rng| {
        let n = rng.random_range(1..=top);
        let d = field.real_dim() * n;
        // some trials use the plain coordinates ℝ⁴ⁿ ≅ ℍⁿ, no rotation
        let rot = if rng.random_bool(0.25) {
            Matrix::identity(FieldTag::R, d)
        } else {
            random_unitary(rng, FieldTag::R, d)
        };
        let ops = match field {
            FieldTag::C => StructureOps::right_multiplication_complex(n),
            _ => StructureOps::right_multiplication_quaternionic(n),
        };
        let conj = |m: &Matrix| &(&rot * m) * &rot.transpose();
        let ops = StructureOps { s: conj(&ops.s), t: ops.t.as_ref().map(conj) };
        let gram = Matrix::identity(FieldTag::R, d);
        let uh = random_matrix(rng, field, n, 1);
        let vh = random_matrix(rng, field, n, 1);
        let (u, v) = (&rot * &realify(&uh), &rot * &realify(&vh));
        let expected = Matrix::inner(&uh, &vh).map_err(|e| e.to_string())?;
        let (uv, uu) = match field {
            FieldTag::C => {
                let f = ComplexForm::new(gram, &ops, tol.structure).map_err(|e| e.to_string())?;
                (f.inner(&u, &v), f.inner(&u, &u))
            }
            _ => {
                let f = QuaternionicForm::new(gram, &ops, tol.structure).map_err(|e| e.to_string())?;
                (f.inner(&u, &v), f.inner(&u, &u))
            }
        };
        let (uv, uu) = (uv.map_err(|e| e.to_string())?, uu.map_err(|e| e.to_string())?);
        let scale = (uh.norm() * vh.norm()).max(1.0);
        let agree = (uv - expected).norm() / scale;
        let q = uu.value();
        let imaginary = Quat::new(0.0, q.x, q.y, q.z).norm() / uh.norm().powi(2).max(1.0);
        Ok(agree.max(imaginary))
    });
    r
}
