//! Seeded random generation for fixtures.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, so a seed reproduces the same stream on every
//! platform. Uniform draws use `rand`'s `gen_range` on half-open intervals.

use crate::algebra::{Field, Mat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type FixtureRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Scalar of `field` with components uniform in `[-1, 1)`.
pub fn uniform_scalar(rng: &mut FixtureRng, field: Field) -> Scalar {
    let mut v = [0.0; 4];
    for x in v.iter_mut().take(field.components()) {
        *x = rng.gen_range(-1.0..1.0);
    }
    Scalar::new(v[0], v[1], v[2], v[3])
}

pub fn uniform_matrix(rng: &mut FixtureRng, rows: usize, cols: usize, field: Field) -> Mat {
    Mat::from_fn(rows, cols, field, |_, _| uniform_scalar(rng, field))
}

/// Anti-Hermitian `n×n` matrix over `field`, entries of size `O(scale)`.
pub fn anti_hermitian(rng: &mut FixtureRng, n: usize, field: Field, scale: f64) -> Mat {
    let m = uniform_matrix(rng, n, n, field);
    (&m - &m.adjoint()).scale(0.5 * scale)
}

/// Standard normal vector of length `n` (Box–Muller).
pub fn gaussian_vec(rng: &mut FixtureRng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            let v: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        })
        .collect()
}
