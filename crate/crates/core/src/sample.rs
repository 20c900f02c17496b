//! Seeded random sampling of scalars, matrices and subspaces.
//!
//! Every check draws from its own ChaCha stream derived from
//! `(check name, seed, field, trial)`, so adding a check never perturbs
//! the values another check sees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{gram_schmidt, Matrix};
use crate::scalars::{FieldTag, Quat, Scalar};

pub type Rng64 = ChaCha8Rng;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one trial of one check.
pub fn trial_seed(check: &str, seed: u64, field: FieldTag, trial: u64) -> u64 {
    let mut h = splitmix(fnv1a(check.as_bytes()) ^ seed);
    h = splitmix(h ^ field as u64);
    splitmix(h ^ trial)
}

pub fn rng_for(check: &str, seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(splitmix(fnv1a(check.as_bytes()) ^ seed))
}

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Gaussian quaternion restricted to `field`.
pub fn random_quat<R: Rng>(rng: &mut R, field: FieldTag) -> Quat {
    let mut c = [0.0; 4];
    for x in c.iter_mut().take(field.real_dim()) {
        *x = gauss(rng);
    }
    Quat::new(c[0], c[1], c[2], c[3])
}

pub fn random_scalar<R: Rng>(rng: &mut R, field: FieldTag) -> Scalar {
    Scalar::new(field, random_quat(rng, field))
}

/// Nonzero with probability one; resampled on the null event.
pub fn random_nonzero_scalar<R: Rng>(rng: &mut R, field: FieldTag) -> Scalar {
    loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: FieldTag, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| random_quat(rng, field))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, field: FieldTag, n: usize) -> Matrix {
    let a = random_matrix(rng, field, n, n);
    (&a + &a.dagger()).scale(0.5)
}

/// `n × k` isometry from orthonormalizing a Gaussian matrix (`k ≤ n`).
pub fn random_isometry<R: Rng>(rng: &mut R, field: FieldTag, n: usize, k: usize) -> Matrix {
    assert!(k <= n, "isometry {n}x{k} needs k <= n");
    loop {
        let gs = gram_schmidt(&random_matrix(rng, field, n, k), 1e-8);
        if gs.rank == k {
            return gs.isometry;
        }
    }
}

pub fn random_unitary<R: Rng>(rng: &mut R, field: FieldTag, n: usize) -> Matrix {
    random_isometry(rng, field, n, n)
}

pub fn random_dim<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}
