//! Rank-`k` matrices as `4k + 1` diagonal / circulant factors.
//!
//! With `M_k = A B^*` (`A`, `B` of size `n x k`) and the circulant `R` whose
//! first column has ones at positions `k-1, 2k-1, ...`, one finds diagonal
//! matrices `D_i` such that `W = sum_{i<k} D_i Z^i` satisfies `(W R)[:, :k] = A`,
//! where `Z` is the cyclic down shift. Each row of `D_i` comes from a `k x k`
//! permutation system. Then
//!
//! ```text
//! M_k = W_A R diag(1, ..., 1, 0, ..., 0) R^* W_B^*
//! ```
//!
//! `W` is a polynomial of degree `k - 1` in `Z` with diagonal coefficients.
//! Splitting off right roots `Z - E` one at a time, and writing each as
//! `diag(shift(z)) (Z - lambda I) diag(1/z)`, turns it into `2k - 1` alternating
//! factors, which gives `4k + 1` overall.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{DCFactorization, Factor};
use crate::dense::{ComplexVector, DenseMatrix, ONE, ZERO};
use crate::error::{Error, Result};
use crate::rng::{seeded, SeededRng};
use crate::structured::{CirculantMatrix, DiagonalMatrix};

/// Default bound on `||product - M_k||_F / ||M_k||_F`.
pub const DEFAULT_RECONSTRUCTION_TOL: f64 = 1e-6;

const ATTEMPTS: u64 = 6;
const ZERO_ROW_REL: f64 = 1e-12;
const ROOT_RESIDUAL_REL: f64 = 1e-9;

/// Factors the rank-`k` SVD truncation of the square matrix `m`.
///
/// The result has exactly `4k + 1` factors, starts and ends with a diagonal,
/// and reconstructs the truncation to [`DEFAULT_RECONSTRUCTION_TOL`].
pub fn decompose_rank(m: &DenseMatrix, k: usize) -> Result<DCFactorization> {
    decompose_rank_with_tol(m, k, DEFAULT_RECONSTRUCTION_TOL)
}

/// Real-valued convenience wrapper around [`decompose_rank`].
pub fn decompose_rank_real(rows: &[Vec<f64>], k: usize) -> Result<DCFactorization> {
    decompose_rank(&DenseMatrix::from_real_rows(rows)?, k)
}

pub fn decompose_rank_with_tol(m: &DenseMatrix, k: usize, tol: f64) -> Result<DCFactorization> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Empty("matrix"));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("rank must be positive".into()));
    }
    if k > n || n % k != 0 {
        return Err(Error::RankDoesNotDivide { n, rank: k });
    }

    let svd = m.svd()?;
    let s: Vec<f64> = svd.s[..k].to_vec();
    let u_k = DenseMatrix::from_fn(n, k, |i, j| svd.u[(i, j)]);
    let v_k = DenseMatrix::from_fn(n, k, |i, j| svd.v[(i, j)]);
    let target = DenseMatrix::from_fn(n, n, |i, j| {
        (0..k).map(|c| u_k[(i, c)] * s[c] * v_k[(j, c)].conj()).sum()
    });
    let target_norm = target.frobenius_norm();
    let is_zero = s.iter().all(|&x| x == 0.0);

    let mut last_err = Error::Numerical("no decomposition attempt succeeded".into());
    for attempt in 0..ATTEMPTS {
        let mut rng = seeded(0x5eed_dc00 + attempt);
        let q = random_unitary(k, &mut rng)?;
        let (a, b, middle) = if is_zero {
            (u_k.matmul(&q)?, v_k.matmul(&q)?, ZERO)
        } else {
            let root_s = DenseMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    Complex64::new(s[i].sqrt(), 0.0)
                } else {
                    ZERO
                }
            });
            (
                u_k.matmul(&root_s)?.matmul(&q)?,
                v_k.matmul(&root_s)?.matmul(&q)?,
                ONE,
            )
        };
        let built = (|| -> Result<DCFactorization> {
            let left = shift_polynomial_factors(&a, k, &mut rng)?;
            let right = shift_polynomial_factors(&b, k, &mut rng)?;
            let r = selector_circulant(n, k)?;
            let mut mid = vec![ZERO; n];
            mid[..k].fill(middle);

            let mut factors = left;
            factors.push(Factor::Circulant(r.clone()));
            factors.push(Factor::Diagonal(DiagonalMatrix::new(ComplexVector::new(mid)?)));
            factors.push(Factor::Circulant(r.adjoint()));
            factors.extend(right.iter().rev().map(Factor::adjoint));
            Ok(DCFactorization::new(n, factors)?.with_target_rank(k))
        })();
        let f = match built {
            Ok(f) => f,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let product = f.to_dense()?;
        let err = product.relative_frobenius_error(&target)?;
        let abs = err * if target_norm > 0.0 { target_norm } else { 1.0 };
        if abs <= tol * target_norm || abs == 0.0 {
            return Ok(f.with_reconstruction_error(err));
        }
        last_err = Error::Numerical(format!(
            "reconstruction error {err:e} exceeds tolerance {tol:e}"
        ));
    }
    Err(last_err)
}

/// `circ(r)` with `r_t = 1` exactly when `t mod k == k - 1`.
fn selector_circulant(n: usize, k: usize) -> Result<CirculantMatrix> {
    let r: Vec<f64> = (0..n).map(|t| if t % k == k - 1 { 1.0 } else { 0.0 }).collect();
    CirculantMatrix::from_real(&r)
}

fn random_unitary(k: usize, rng: &mut SeededRng) -> Result<DenseMatrix> {
    let g = DenseMatrix::from_fn(k, k, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let q = g.to_faer().qr().compute_Q();
    Ok(DenseMatrix::from_faer(q.as_ref()))
}

/// Diagonal coefficients `d_i` (`i < k`) of `W = sum_i diag(d_i) Z^i` with
/// `(W R)[:, :k] = a`, one `k x k` solve per row.
fn shift_coefficients(a: &DenseMatrix, k: usize) -> Result<Vec<Vec<Complex64>>> {
    let n = a.rows();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let block = DenseMatrix::from_fn(k, k, |c, i| {
                let t = (j + 2 * n - i - c) % n;
                if t % k == k - 1 {
                    ONE
                } else {
                    ZERO
                }
            });
            block.solve(a.row(j)).map_err(|_| {
                Error::Numerical(format!("selector block system for row {j} is singular"))
            })
        })
        .collect::<Result<_>>()?;
    Ok((0..k).map(|i| rows.iter().map(|r| r[i]).collect()).collect())
}

/// `2k - 1` alternating factors (diagonal first and last) whose product is the
/// `W` built from `a`.
fn shift_polynomial_factors(a: &DenseMatrix, k: usize, rng: &mut SeededRng) -> Result<Vec<Factor>> {
    let n = a.rows();
    // Zero rows of `a` force zero rows of `W`, which stalls the root recurrence.
    // Fill them with noise and mask them back out on the leading diagonal.
    let norms: Vec<f64> = (0..n).map(|j| crate::dense::norm2(a.row(j))).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    let mask: Vec<Complex64> = norms
        .iter()
        .map(|&r| if r > ZERO_ROW_REL * max_norm && r > 0.0 { ONE } else { ZERO })
        .collect();
    let filled = DenseMatrix::from_fn(n, k, |j, c| {
        if mask[j] == ONE {
            a[(j, c)]
        } else {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        }
    });

    let mut poly = shift_coefficients(&filled, k)?;
    let mut roots = Vec::with_capacity(k - 1);
    while poly.len() > 1 {
        let root = right_root(&poly)?;
        poly = deflate(&poly, &root.e)?;
        roots.push(root);
    }
    let lead: Vec<Complex64> = poly[0].iter().zip(&mask).map(|(g, m)| g * m).collect();

    // roots[0] is the rightmost linear factor.
    let mut factors = Vec::with_capacity(2 * k - 1);
    let mut left_diag = lead;
    for root in roots.iter().rev() {
        let shifted = cyclic_shift(&root.z, 1);
        let d: Vec<Complex64> = left_diag.iter().zip(&shifted).map(|(x, y)| x * y).collect();
        factors.push(Factor::Diagonal(DiagonalMatrix::new(ComplexVector::new(d)?)));
        let mut col = vec![ZERO; n];
        col[0] = -root.lambda;
        col[1 % n] += ONE;
        factors.push(Factor::Circulant(CirculantMatrix::new(ComplexVector::new(col)?)));
        left_diag = root.z.iter().map(|z| z.inv()).collect();
    }
    factors.push(Factor::Diagonal(DiagonalMatrix::new(ComplexVector::new(left_diag)?)));
    Ok(factors)
}

/// `(Z^s v)_j = v_{j - s}`.
fn cyclic_shift(v: &[Complex64], s: usize) -> Vec<Complex64> {
    let n = v.len();
    (0..n).map(|j| v[(j + n - s % n) % n]).collect()
}

struct RightRoot {
    e: Vec<Complex64>,
    z: Vec<Complex64>,
    lambda: Complex64,
}

/// Finds a diagonal `E` with `F = G (Z - E)` for the polynomial
/// `F = sum_i diag(poly[i]) Z^i`.
///
/// Writing `Z - E = diag(shift(z)) (Z - lambda) diag(1/z)`, the condition is
/// `sum_i a_{i,j} lambda^i z_{j-i} = 0` for every `j` (indices cyclic). With
/// `w_j = lambda^{-j} z_j` this is a lambda-free recurrence whose one-period
/// monodromy must have eigenvalue `lambda^{-n}`.
fn right_root(poly: &[Vec<Complex64>]) -> Result<RightRoot> {
    let m = poly.len() - 1;
    let n = poly[0].len();
    let scale = poly
        .iter()
        .flat_map(|c| c.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if poly[0].iter().any(|a| a.norm() <= 1e-14 * scale) {
        return Err(Error::Numerical("vanishing constant coefficient".into()));
    }

    // Monodromy on the state (w_{j}, w_{j-1}, ..., w_{j-m+1}), kept normalized.
    let mut phi = DenseMatrix::identity(m);
    let mut log_scale = 0.0;
    for j in 0..n {
        let inv = -poly[0][j].inv();
        let head: Vec<Complex64> = (0..m)
            .map(|col| (1..=m).map(|i| poly[i][j] * phi[(i - 1, col)]).sum::<Complex64>() * inv)
            .collect();
        for row in (1..m).rev() {
            for col in 0..m {
                phi[(row, col)] = phi[(row - 1, col)];
            }
        }
        for (col, h) in head.into_iter().enumerate() {
            phi[(0, col)] = h;
        }
        let big = phi.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(big.is_finite() && big > 0.0) {
            return Err(Error::Numerical("degenerate monodromy".into()));
        }
        phi = phi.scale(Complex64::new(1.0 / big, 0.0));
        log_scale += big.ln();
    }

    let (values, vectors) = phi.eigen()?;
    let mut best: Option<(f64, RightRoot)> = None;
    for (idx, mu) in values.iter().enumerate() {
        if mu.norm() == 0.0 || !mu.norm().is_finite() {
            continue;
        }
        let log_mu = Complex64::new(mu.norm().ln() + log_scale, mu.arg());
        let lambda = (-log_mu / n as f64).exp();
        if !(lambda.norm().is_finite() && lambda.norm() > 0.0) {
            continue;
        }
        let v: Vec<Complex64> = (0..m).map(|r| vectors[(r, idx)]).collect();
        if let Some((quality, root)) = root_from_eigenpair(poly, lambda, &v) {
            if best.as_ref().map_or(true, |(q, _)| quality > *q) {
                best = Some((quality, root));
            }
        }
    }
    best.map(|(_, r)| r)
        .ok_or_else(|| Error::Numerical("no well-conditioned right root".into()))
}

/// Runs the lambda-weighted recurrence from the eigenvector, checks cyclic
/// closure, and scores the root by `min |z| / max |z|`.
fn root_from_eigenpair(
    poly: &[Vec<Complex64>],
    lambda: Complex64,
    v: &[Complex64],
) -> Option<(f64, RightRoot)> {
    let m = poly.len() - 1;
    let n = poly[0].len();
    let lambda_pows: Vec<Complex64> = (0..=m).map(|i| lambda.powu(i as u32)).collect();
    let inv_lambda = lambda.inv();

    // z_{-i} = lambda^{-i} w_{-i}, and w_{-i} = v[i-1].
    let init: Vec<Complex64> = (1..=m).map(|i| inv_lambda.powu(i as u32) * v[i - 1]).collect();
    let mut z = vec![ZERO; n];
    for j in 0..n {
        let mut acc = ZERO;
        for i in 1..=m {
            let prev = if j >= i { z[j - i] } else { init[i - j - 1] };
            acc += poly[i][j] * lambda_pows[i] * prev;
        }
        z[j] = -acc / poly[0][j];
    }
    let zmax = z.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if !(zmax.is_finite() && zmax > 0.0) {
        return None;
    }
    for x in z.iter_mut() {
        *x /= zmax;
    }

    // Cyclic residual of sum_i a_{i,j} lambda^i z_{j-i}.
    for j in 0..n {
        let mut acc = ZERO;
        let mut mag = 0.0;
        for i in 0..=m {
            let t = poly[i][j] * lambda_pows[i] * z[(j + n * (m / n + 1) - i) % n];
            acc += t;
            mag += t.norm();
        }
        if !(acc.norm() <= ROOT_RESIDUAL_REL * mag) {
            return None;
        }
    }
    let zmin = z.iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min);
    if !(zmin > 0.0) {
        return None;
    }
    let e: Vec<Complex64> = (0..n).map(|j| lambda * z[(j + n - 1) % n] / z[j]).collect();
    Some((zmin, RightRoot { e, z, lambda }))
}

/// Right division by `Z - E`: returns `G` with `F = G (Z - E)`.
fn deflate(poly: &[Vec<Complex64>], e: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let m = poly.len() - 1;
    let n = e.len();
    let mut g = vec![vec![ZERO; n]; m];
    g[m - 1] = poly[m].clone();
    for i in (1..m).rev() {
        let se = cyclic_shift(e, i);
        g[i - 1] = (0..n).map(|j| poly[i][j] + g[i][j] * se[j]).collect();
    }
    let scale = poly
        .iter()
        .flat_map(|c| c.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let rem = (0..n)
        .map(|j| (poly[0][j] + g[0][j] * e[j]).norm())
        .fold(0.0, f64::max);
    if !(rem <= 1e-8 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Numerical(format!("right division left remainder {rem:e}")));
    }
    Ok(g)
}
