//! Finite-dimensional Hilbert spaces over ℝ, ℂ and ℍ viewed as a dagger
//! category, with computational checks of its structure: biproducts,
//! equalizers and kernels, the ortholattice of dagger subobjects, the
//! hom-functor equivalence, and decompositions of operators into linear
//! combinations of unitaries.

// NaN-rejecting `!(x <= tol)` tests and index loops in the eigensolvers are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::suspicious_arithmetic_impl)]

pub mod cli;
pub mod dagcat;
pub mod error;
#[doc(hidden)]
pub mod fuzzing;
pub mod l2equiv;
pub mod linalg;
pub mod monoidal;
pub mod ortho;
pub mod report;
pub mod sample;
pub mod scalars;
pub mod tolerance;
pub mod unidecomp;

pub use error::{Error, Result};
pub use linalg::{Matrix, Morphism, Vector};
pub use scalars::{FieldTag, Quat, Scalar};
pub use tolerance::ToleranceProfile;
