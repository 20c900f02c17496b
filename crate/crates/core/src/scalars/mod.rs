//! The involutive division rings ℝ ⊂ ℂ ⊂ ℍ.
//!
//! Every value is stored as a quaternion `w + xi + yj + zk`; real and
//! complex scalars are the subalgebras with the trailing components zero.
//! The [`FieldTag`] records which ring a value is meant to live in, and the
//! checked operations refuse to mix rings.

mod laws;
mod structure;

pub use laws::check_ring_laws;
pub use structure::{check_promotion, realify, promote_complex, promote_quaternionic, ComplexForm, QuaternionicForm, StructureOps};

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of ℝ, ℂ, ℍ a value belongs to. Ordered by expressiveness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    R,
    C,
    H,
}

impl FieldTag {
    pub const ALL: [FieldTag; 3] = [FieldTag::R, FieldTag::C, FieldTag::H];

    /// Number of real components a scalar of this field carries.
    pub fn real_dim(self) -> usize {
        match self {
            FieldTag::R => 1,
            FieldTag::C => 2,
            FieldTag::H => 4,
        }
    }

    pub fn is_commutative(self) -> bool {
        self != FieldTag::H
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldTag::R => "R",
            FieldTag::C => "C",
            FieldTag::H => "H",
        }
    }

    /// Parses the CLI spelling (`r`, `c`, `h`, case-insensitive).
    pub fn parse(s: &str) -> Option<FieldTag> {
        match s.to_ascii_lowercase().as_str() {
            "r" => Some(FieldTag::R),
            "c" => Some(FieldTag::C),
            "h" => Some(FieldTag::H),
            _ => None,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Raw quaternion arithmetic, no field bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Quat {
        Quat { w, x, y, z }
    }

    pub const fn real(w: f64) -> Quat {
        Quat::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Quat {
        Quat::new(re, im, 0.0, 0.0)
    }

    pub fn conj(self) -> Quat {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `conj(q)·q`, always a nonnegative real.
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Two-sided inverse `conj(q)/|q|²`. Caller guarantees `q ≠ 0`.
    pub fn inv_unchecked(self) -> Quat {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    pub fn scale(self, r: f64) -> Quat {
        Quat::new(self.w * r, self.x * r, self.y * r, self.z * r)
    }

    pub fn components(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn is_zero(self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(self, other: Quat) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }

    /// Smallest field containing this value.
    pub fn field(self) -> FieldTag {
        if self.y != 0.0 || self.z != 0.0 {
            FieldTag::H
        } else if self.x != 0.0 {
            FieldTag::C
        } else {
            FieldTag::R
        }
    }

    /// Splits `a + b j` into complex parts `(a, b)`, each as `(re, im)`.
    pub fn to_complex_pair(self) -> ((f64, f64), (f64, f64)) {
        ((self.w, self.x), (self.y, self.z))
    }

    pub fn from_complex_pair(a: (f64, f64), b: (f64, f64)) -> Quat {
        Quat::new(a.0, a.1, b.0, b.1)
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl AddAssign for Quat {
    fn add_assign(&mut self, o: Quat) {
        *self = *self + o;
    }
}

impl SubAssign for Quat {
    fn sub_assign(&mut self, o: Quat) {
        *self = *self - o;
    }
}

/// Hamilton product; `i·j = k`, `j·i = −k`.
impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        let (a, b) = (self, o);
        Quat::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, r: f64) -> Quat {
        self.scale(r)
    }
}

/// An element of ℝ, ℂ or ℍ. Plays the role of an endomorphism of the
/// one-dimensional generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    field: FieldTag,
    value: Quat,
}

impl Scalar {
    /// Builds a scalar, dropping components the field does not carry.
    pub fn new(field: FieldTag, value: Quat) -> Scalar {
        let value = match field {
            FieldTag::R => Quat::real(value.w),
            FieldTag::C => Quat::complex(value.w, value.x),
            FieldTag::H => value,
        };
        Scalar { field, value }
    }

    pub fn real(field: FieldTag, r: f64) -> Scalar {
        Scalar::new(field, Quat::real(r))
    }

    pub fn zero(field: FieldTag) -> Scalar {
        Scalar::real(field, 0.0)
    }

    pub fn one(field: FieldTag) -> Scalar {
        Scalar::real(field, 1.0)
    }

    /// Builds from the component slice used on the wire: `[w]`, `[re,im]`,
    /// or `[w,x,y,z]`.
    pub fn from_components(field: FieldTag, c: &[f64]) -> Result<Scalar> {
        if c.len() != field.real_dim() {
            return Err(Error::Parse(format!(
                "scalar over {field} needs {} components, got {}",
                field.real_dim(),
                c.len()
            )));
        }
        let mut q = [0.0; 4];
        q[..c.len()].copy_from_slice(c);
        Ok(Scalar::new(field, Quat::new(q[0], q[1], q[2], q[3])))
    }

    pub fn components(&self) -> Vec<f64> {
        self.value.components()[..self.field.real_dim()].to_vec()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn value(&self) -> Quat {
        self.value
    }

    /// Reinterprets the value in a larger field.
    pub fn promote(&self, field: FieldTag) -> Result<Scalar> {
        if field < self.field {
            return Err(Error::FieldMismatch {
                expected: field,
                found: self.field,
            });
        }
        Ok(Scalar::new(field, self.value))
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(Scalar::new(self.field, self.value * other.value))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(Scalar::new(self.field, self.value + other.value))
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.field, self.value.conj())
    }

    pub fn norm(&self) -> f64 {
        self.value.norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.value.norm_sqr()
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.value.is_zero() {
            return Err(Error::Domain("inverse of zero scalar".into()));
        }
        Ok(Scalar::new(self.field, self.value.inv_unchecked()))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Residual `|a − b| / max(1, |a|, |b|)`.
    pub fn rel_diff(&self, other: &Scalar) -> f64 {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (self.value - other.value).norm() / scale
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar::new(self.field.max(o.field), self.value + o.value)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::new(self.field.max(o.field), self.value - o.value)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar::new(self.field.max(o.field), self.value * o.value)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    /// Right division `a · b⁻¹`. Dividing by zero yields non-finite components.
    fn div(self, o: Scalar) -> Scalar {
        Scalar::new(self.field.max(o.field), self.value * o.value.inv_unchecked())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(self.field, -self.value)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.value;
        match self.field {
            FieldTag::R => write!(f, "{}", q.w),
            FieldTag::C => write!(f, "{}{:+}i", q.w, q.x),
            FieldTag::H => write!(f, "{}{:+}i{:+}j{:+}k", q.w, q.x, q.y, q.z),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = self.components();
        let mut seq = s.serialize_seq(Some(c.len()))?;
        for v in c {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// Deserializes with the field inferred from the array length.
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let c: Vec<f64> = Vec::deserialize(d)?;
        let field = match c.len() {
            1 => FieldTag::R,
            2 => FieldTag::C,
            4 => FieldTag::H,
            n => return Err(de::Error::custom(format!("scalar array of length {n}"))),
        };
        Scalar::from_components(field, &c).map_err(de::Error::custom)
    }
}
