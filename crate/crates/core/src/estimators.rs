//! Estimators of the largest singular value of a convolution layer.

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};
use crate::fft::fft2;
use crate::limits::Limits;
use crate::lipbound::{lipbound, GridSpec};
use crate::rng::{seeded, standard_normal_nonzero};
use crate::toeplitz::{build_conv_matrix_with, conv2d, conv2d_transpose, ConvKernel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactSvd,
    PowerMethod,
    ConvPowerMethod,
    Sedghi,
    Singla,
    LipBound,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::ExactSvd,
        Method::PowerMethod,
        Method::ConvPowerMethod,
        Method::Sedghi,
        Method::Singla,
        Method::LipBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ExactSvd => "exact_svd",
            Method::PowerMethod => "power_method",
            Method::ConvPowerMethod => "conv_power_method",
            Method::Sedghi => "sedghi",
            Method::Singla => "singla",
            Method::LipBound => "lipbound",
        }
    }

    pub fn is_iterative(self) -> bool {
        matches!(self, Method::PowerMethod | Method::ConvPowerMethod)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaEstimate {
    pub value: f64,
    pub method: Method,
    /// Present exactly for iterative methods.
    pub iterations_used: Option<usize>,
    pub elapsed: Duration,
}

/// Largest singular value of a dense matrix.
pub fn exact_sigma1(m: &DenseMatrix) -> Result<f64> {
    m.sigma_max()
}

/// `sigma_1` of the zero-padded convolution operator on `n x n` inputs.
pub fn exact_conv_sigma1(k: &ConvKernel, n: usize, limits: &Limits) -> Result<f64> {
    exact_sigma1(&build_conv_matrix_with(k, n, limits)?)
}

/// `iters` rounds of `x <- M^H M x / ||x||` from a seeded Gaussian start,
/// returning `||M x|| / ||x||`.
pub fn power_method(m: &DenseMatrix, iters: usize, seed: u64) -> Result<f64> {
    if iters == 0 {
        return Err(Error::InvalidArgument("at least one iteration is required".into()));
    }
    let mut rng = seeded(seed);
    let mut x: Vec<Complex64> = standard_normal_nonzero(&mut rng, m.cols())
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    for _ in 0..iters {
        let nx = norm2(&x);
        let y = m.matvec(&x)?;
        if norm2(&y) == 0.0 {
            return Ok(0.0);
        }
        x = m.adjoint_matvec(&y)?;
        for v in x.iter_mut() {
            *v /= nx;
        }
        if norm2(&x) == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(norm2(&m.matvec(&x)?) / norm2(&x))
}

/// Power iteration on the convolution itself, alternating normalized
/// forward and transposed convolutions, never materializing the operator.
pub fn conv_power_method(k: &ConvKernel, n: usize, iters: usize, seed: u64) -> Result<f64> {
    if iters == 0 {
        return Err(Error::InvalidArgument("at least one iteration is required".into()));
    }
    let mut rng = seeded(seed);
    let mut x = standard_normal_nonzero(&mut rng, k.cin() * n * n);
    normalize(&mut x);
    for _ in 0..iters {
        let mut y = conv2d(k, &x, n)?;
        if !normalize(&mut y) {
            return Ok(0.0);
        }
        x = conv2d_transpose(k, &y, n)?;
        if !normalize(&mut x) {
            return Ok(0.0);
        }
    }
    let y = conv2d(k, &x, n)?;
    Ok(real_norm(&y))
}

fn real_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) -> bool {
    let n = real_norm(v);
    if n == 0.0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

/// Per-frequency `cout x cin` transfer matrices of the circular convolution,
/// kernel embedded at the top-left of an `n x n` grid.
fn transfer_spectra(k: &ConvKernel, n: usize, limits: &Limits) -> Result<Vec<Vec<Complex64>>> {
    if n < k.size() {
        return Err(Error::InvalidArgument(format!(
            "input size {n} is smaller than the kernel size {}",
            k.size()
        )));
    }
    limits.check_elements(
        "sedghi spectra",
        (k.cout() * k.cin()) as u128 * (n as u128) * (n as u128),
        16,
    )?;
    let s = k.size();
    Ok((0..k.cout() * k.cin())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / k.cin(), idx % k.cin());
            let mut grid = vec![Complex64::new(0.0, 0.0); n * n];
            for a in 0..s {
                for b in 0..s {
                    grid[a * n + b] = Complex64::new(k.at(i, j, a, b), 0.0);
                }
            }
            fft2(&grid, n, n)
        })
        .collect())
}

/// `max` over the `n^2` frequencies of `sigma_1` of the transfer matrix.
/// Exact for wrap-around convolution, an approximation for zero padding.
pub fn sedghi_sigma(k: &ConvKernel, n: usize) -> Result<f64> {
    sedghi_sigma_with(k, n, &Limits::from_env())
}

pub fn sedghi_sigma_with(k: &ConvKernel, n: usize, limits: &Limits) -> Result<f64> {
    let spectra = transfer_spectra(k, n, limits)?;
    let (cout, cin) = (k.cout(), k.cin());
    let per_freq: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|f| -> Result<f64> {
            if cout == 1 || cin == 1 {
                return Ok(spectra.iter().map(|s| s[f].norm_sqr()).sum::<f64>().sqrt());
            }
            let p = DenseMatrix::from_fn(cout, cin, |i, j| spectra[i * cin + j][f]);
            Ok(p.singular_values()?[0])
        })
        .collect::<Result<_>>()?;
    Ok(per_freq.into_iter().fold(0.0, f64::max))
}

/// Every singular value of the circular convolution operator: the union over
/// frequencies of the transfer-matrix singular values (moduli of the 2-D DFT
/// for a single channel). Sorted nonincreasing.
pub fn sedghi_spectrum(k: &ConvKernel, n: usize) -> Result<Vec<f64>> {
    let spectra = transfer_spectra(k, n, &Limits::from_env())?;
    let (cout, cin) = (k.cout(), k.cin());
    let mut all: Vec<f64> = Vec::with_capacity(n * n * cout.min(cin));
    for f in 0..n * n {
        if cout == 1 && cin == 1 {
            all.push(spectra[0][f].norm());
        } else {
            let p = DenseMatrix::from_fn(cout, cin, |i, j| spectra[i * cin + j][f]);
            all.extend(p.singular_values()?);
        }
    }
    all.sort_by(|a, b| b.total_cmp(a));
    Ok(all)
}

/// `min(s sigma_1(R), s sigma_1(S))` where `R` stacks the `s x s` slices
/// `K_ij` into an `(s cout) x (s cin)` matrix and `S` stacks their transposes.
pub fn singla_bound(k: &ConvKernel) -> Result<f64> {
    let s = k.size();
    let (cout, cin) = (k.cout(), k.cin());
    let r = DenseMatrix::from_fn(s * cout, s * cin, |row, col| {
        Complex64::new(k.at(row / s, col / s, row % s, col % s), 0.0)
    });
    let t = DenseMatrix::from_fn(s * cout, s * cin, |row, col| {
        Complex64::new(k.at(row / s, col / s, col % s, row % s), 0.0)
    });
    let scale = s as f64;
    Ok((scale * exact_sigma1(&r)?).min(scale * exact_sigma1(&t)?))
}

/// How many times to run each method and which run statistic to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timing {
    pub warmup: usize,
    pub runs: usize,
}

impl Default for Timing {
    fn default() -> Self {
        Self { warmup: 1, runs: 5 }
    }
}

impl Timing {
    pub fn once() -> Self {
        Self { warmup: 0, runs: 1 }
    }

    /// Runs `f` `warmup + runs` times; returns the last value and the median
    /// wall time over the measured runs.
    pub fn measure<T>(&self, mut f: impl FnMut() -> Result<T>) -> Result<(T, Duration)> {
        for _ in 0..self.warmup {
            f()?;
        }
        let runs = self.runs.max(1);
        let mut times = Vec::with_capacity(runs);
        let mut last = None;
        for _ in 0..runs {
            let start = Instant::now();
            let v = f()?;
            times.push(start.elapsed());
            last = Some(v);
        }
        times.sort();
        let mid = times.len() / 2;
        let median = if times.len() % 2 == 1 {
            times[mid]
        } else {
            (times[mid - 1] + times[mid]) / 2
        };
        Ok((last.expect("at least one run"), median))
    }
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub n: usize,
    pub grid: GridSpec,
    pub corrected: bool,
    pub iters: usize,
    pub seed: u64,
    pub timing: Timing,
    pub limits: Limits,
}

/// One row of [`compare_all`]; failures are kept per method.
#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub method: Method,
    pub result: Result<SigmaEstimate>,
}

/// Runs every estimator on `k`. A failing method yields an `Err` row; the
/// sweep always covers all methods.
pub fn compare_all(k: &ConvKernel, opts: &CompareOptions) -> Vec<MethodOutcome> {
    Method::ALL
        .iter()
        .map(|&method| MethodOutcome {
            method,
            result: run_method(k, method, opts),
        })
        .collect()
}

fn run_method(k: &ConvKernel, method: Method, opts: &CompareOptions) -> Result<SigmaEstimate> {
    let n = opts.n;
    let t = &opts.timing;
    let (value, elapsed) = match method {
        Method::ExactSvd => t.measure(|| exact_conv_sigma1(k, n, &opts.limits))?,
        Method::PowerMethod => t.measure(|| {
            let m = build_conv_matrix_with(k, n, &opts.limits)?;
            power_method(&m.transpose(), opts.iters, opts.seed)
        })?,
        Method::ConvPowerMethod => {
            let elems = (k.cin() + k.cout()) as u128 * (n as u128) * (n as u128);
            opts.limits.check_elements("convolution iterates", elems, 8)?;
            t.measure(|| conv_power_method(k, n, opts.iters, opts.seed))?
        }
        Method::Sedghi => t.measure(|| sedghi_sigma_with(k, n, &opts.limits))?,
        Method::Singla => t.measure(|| singla_bound(k))?,
        Method::LipBound => t.measure(|| Ok(lipbound(k, &opts.grid, opts.corrected)?.bound))?,
    };
    Ok(SigmaEstimate {
        value,
        method,
        iterations_used: method.is_iterative().then_some(opts.iters),
        elapsed,
    })
}
