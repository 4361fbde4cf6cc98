//! Shared fixtures for the benchmarks.

use toeplipz_core::rng::{seeded, standard_normal_nonzero};
use toeplipz_core::{CirculantMatrix, Complex64, ConvKernel};

pub fn kernel(cout: usize, cin: usize, s: usize, seed: u64) -> ConvKernel {
    ConvKernel::random_normal(cout, cin, s, s / 2, 1.0, &mut seeded(seed)).expect("valid shape")
}

pub fn circulant_and_vector(n: usize, seed: u64) -> (CirculantMatrix, Vec<Complex64>) {
    let mut rng = seeded(seed);
    let c = CirculantMatrix::from_real(&standard_normal_nonzero(&mut rng, n)).expect("nonempty");
    let x = standard_normal_nonzero(&mut rng, n).into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    (c, x)
}
