//! Seeded, counter-based random streams.
//!
//! All randomness in the crate is drawn from ChaCha20 keyed by a 64-bit seed;
//! independent work items (Monte Carlo batches, trials, restarts) each use
//! their own 64-bit stream id, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Recorded in every report that consumed random numbers.
pub const RNG_VERSION: &str = "chacha20-stream/v1";

pub type StreamRng = ChaCha20Rng;

/// Returns the generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vector(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| gaussian(rng)).collect()
}

/// Uniform point on the unit sphere in `R^d` (normalized Gaussian).
pub fn unit_vector(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vector(rng, d);
        let n = crate::geometry::norm(&v);
        if n > 1e-300 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}
