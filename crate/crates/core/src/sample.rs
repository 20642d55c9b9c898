//! Deterministic vector samples for sampled property checks: every
//! `{-1, 0, 1}` sign pattern on a basis plus seeded random rationals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Vector;
use crate::rational::{ratio, Rational};

/// Default number of seeded random vectors appended to the sign patterns.
pub const RANDOM_VECTORS: usize = 50;

/// Seeded generator used for all sampled checks.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random rational with numerator in `[-9, 9]` and denominator in `[1, 6]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Vector {
    (0..dim).map(|_| random_rational(rng)).collect()
}

/// All nonzero `{-1, 0, 1}` patterns of length `dim`, in lexicographic order.
pub fn sign_patterns(dim: usize) -> Vec<Vector> {
    let total = 3usize.pow(dim as u32);
    (0..total)
        .map(|mut code| {
            (0..dim)
                .map(|_| {
                    let digit = code % 3;
                    code /= 3;
                    ratio(digit as i64 - 1, 1)
                })
                .collect::<Vector>()
        })
        .filter(|v| v.iter().any(|x| *x != ratio(0, 1)))
        .collect()
}

/// Sign patterns followed by `random` seeded vectors.
pub fn deterministic_sample(dim: usize, random: usize, seed: u64) -> Vec<Vector> {
    let mut out = sign_patterns(dim);
    let mut r = rng(seed);
    out.extend((0..random).map(|_| random_vector(&mut r, dim)));
    out
}
