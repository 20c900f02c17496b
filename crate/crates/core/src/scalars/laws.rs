//! Sampled involutive division ring laws.

use crate::report::{run_trials, Report};
use crate::sample::{random_nonzero_scalar, random_scalar};
use crate::scalars::{FieldTag, Scalar};
use crate::tolerance::ToleranceProfile;

fn rel(a: Scalar, b: Scalar, scale: f64) -> f64 {
    (a - b).norm() / scale.max(1.0)
}

/// Ring, involution and inverse laws; each trial draws fresh `a, b, c`
/// and checks every law, so `trials` is the sample count per law.
/// Commutativity of multiplication is checked for ℝ and ℂ and measured
/// for ℍ.
pub fn check_ring_laws(field: FieldTag, trials: u64, seed: u64, tol: &ToleranceProfile) -> Report {
    let mut r = Report::new(
        "scalars.division_ring",
        "scalars form an involutive division ring",
        Some(field),
        tol.ring,
    );
    let mut worst_commutator = 0.0f64;
    run_trials(&mut r, seed, trials, |rng| {
        let (a, b, c) = (random_scalar(rng, field), random_scalar(rng, field), random_scalar(rng, field));
        let nz = random_nonzero_scalar(rng, field);
        let (zero, one) = (Scalar::zero(field), Scalar::one(field));
        let s3 = a.norm() * b.norm() * c.norm();
        let s2 = a.norm() * b.norm() + a.norm() * c.norm();
        let laws = [
            ("(a+b)+c = a+(b+c)", rel((a + b) + c, a + (b + c), a.norm() + b.norm() + c.norm())),
            ("a+b = b+a", rel(a + b, b + a, a.norm() + b.norm())),
            ("a+0 = a", rel(a + zero, a, a.norm())),
            ("a+(-a) = 0", rel(a + (-a), zero, a.norm())),
            ("(ab)c = a(bc)", rel((a * b) * c, a * (b * c), s3)),
            ("a(b+c) = ab+ac", rel(a * (b + c), a * b + a * c, s2)),
            ("(b+c)a = ba+ca", rel((b + c) * a, b * a + c * a, s2)),
            ("1a = a = a1", rel(one * a, a, a.norm()).max(rel(a * one, a, a.norm()))),
            ("x x⁻¹ = 1 = x⁻¹ x", {
                let inv = nz.inv().unwrap_or(zero);
                rel(nz * inv, one, 1.0).max(rel(inv * nz, one, 1.0))
            }),
            ("a** = a", rel(a.conj().conj(), a, a.norm())),
            ("(ab)* = b*a*", rel((a * b).conj(), b.conj() * a.conj(), a.norm() * b.norm())),
            ("(a+b)* = a*+b*", rel((a + b).conj(), a.conj() + b.conj(), a.norm() + b.norm())),
            ("a a* = |a|²", rel(a * a.conj(), Scalar::real(field, a.norm_sqr()), a.norm_sqr())),
            ("|ab| = |a||b|", (((a * b).norm() - a.norm() * b.norm()).abs()) / (a.norm() * b.norm()).max(1.0)),
        ];
        let commutator = rel(a * b, b * a, a.norm() * b.norm());
        worst_commutator = worst_commutator.max(commutator);
        let mut worst = 0.0f64;
        for (name, residual) in laws {
            if residual.is_nan() || residual > tol.ring {
                return Err(format!("{name}: relative residual {residual:e}"));
            }
            worst = worst.max(residual);
        }
        if field.is_commutative() {
            worst = worst.max(commutator);
        }
        Ok(worst)
    });
    r.metric("max_commutator", worst_commutator);
    if !field.is_commutative() {
        r.note("multiplication is not commutative; the commutator is measured, not required to vanish");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws_hold_and_quaternions_do_not_commute() {
        let tol = ToleranceProfile::default();
        for field in FieldTag::ALL {
            let r = check_ring_laws(field, 500, 1, &tol);
            assert!(r.pass(), "{field}: {:?}", r.failures);
            assert_eq!(r.metrics["max_commutator"] > 1e-3, field == FieldTag::H);
        }
    }
}
