//! Seeded random sources shared by the estimators and samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal vector of length `n`, redrawn in the (measure-zero) event it is all zeros.
pub fn standard_normal_nonzero(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if n == 0 || v.iter().any(|&x| x != 0.0) {
            return v;
        }
    }
}
