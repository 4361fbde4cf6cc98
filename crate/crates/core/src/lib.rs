//! Structured-matrix spectral toolkit.
//!
//! - [`structured`]: circulant, diagonal and f-circulant matrices with FFT-based products.
//! - [`dc`]: diagonal-circulant factorizations of rank-`k` matrices, bias folding, initialization.
//! - [`toeplitz`]: Toeplitz and doubly-block Toeplitz matrices, convolution kernels and operators.
//! - [`lipbound`]: the LipBound upper bound on the spectral norm of a convolution.
//! - [`estimators`]: exact, power-iteration and competing estimators of that norm.
//!
//! Circulants use the first-column convention `[C]_{j,k} = c[(j - k) mod n]`,
//! and the forward DFT is `X_k = sum_j x_j exp(-2 pi i jk / n)`.

pub mod dc;
pub mod dense;
pub mod error;
pub mod estimators;
pub mod fft;
pub mod limits;
pub mod lipbound;
pub mod rng;
pub mod structured;
pub mod toeplitz;

pub use dc::{
    complex_relu, decompose_rank, fold_biases, sample_dc_init, DCFactorization, DCInitSample, Factor,
    FoldedBiasChain,
};
pub use dense::{ComplexVector, DenseMatrix};
pub use error::{Error, Result};
pub use estimators::{
    compare_all, conv_power_method, exact_sigma1, power_method, sedghi_sigma, singla_bound, CompareOptions,
    Method, MethodOutcome, SigmaEstimate, Timing,
};
pub use limits::Limits;
pub use lipbound::{gamma_gap, lipbound, lipbound_mono, polygrid_max, GridSpec, LipBoundResult};
pub use num_complex::Complex64;
pub use structured::{CirculantMatrix, DiagonalMatrix, FCirculantMatrix};
pub use toeplitz::{build_conv_matrix, build_dbt, build_toeplitz, eval_poly, kernel_to_polys, ConvKernel, TrigPoly2D};
