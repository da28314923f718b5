//! Fixed inputs shared by the benchmarks.

use lieconf_core::suite::random_poly;
use lieconf_core::MPoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pairs of dense-ish polynomials in four variables, reproducible by seed.
pub fn poly_pairs(count: usize, seed: u64) -> Vec<(MPoly, MPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (random_poly(&mut rng, 8, 3), random_poly(&mut rng, 8, 3)))
        .collect()
}
