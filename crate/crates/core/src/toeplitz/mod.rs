//! Toeplitz, doubly-block Toeplitz and convolution operator matrices.
//!
//! A Toeplitz matrix is stored through its two-sided sequence with
//! `[A]_{i,j} = a_{j-i}`. The doubly-block Toeplitz matrix of a
//! [`TrigPoly2D`] `f` of degree `d` on an `n x n` grid is `n^2 x n^2`, with
//! entry `((bi, k), (bj, l))` equal to `f[bj - bi, l - k]`.

mod conv;
mod kernel;
mod poly;

pub use conv::{circular_conv2d, conv2d, conv2d_transpose};
pub use kernel::{kernel_to_polys, polys_to_kernel, ConvKernel};
pub use poly::{eval_poly, TrigPoly2D};

pub(crate) use poly::{basis, grid_angle};

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// `n x n` Toeplitz matrix from `a_{-(n-1)}, ..., a_{n-1}` (length `2n - 1`).
pub fn build_toeplitz(a: &[Complex64], n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Empty("toeplitz dimension"));
    }
    if a.len() != 2 * n - 1 {
        return Err(Error::DimensionMismatch {
            expected: 2 * n - 1,
            got: a.len(),
        });
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| a[j + n - 1 - i]))
}

/// Doubly-block Toeplitz matrix with an `n x n` grid of `n x n` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyBlockToeplitz {
    n: usize,
    generator: TrigPoly2D,
}

impl DoublyBlockToeplitz {
    /// Requires `n > d` so the band fits inside each block.
    pub fn new(generator: TrigPoly2D, n: usize) -> Result<Self> {
        if n <= generator.degree() {
            return Err(Error::InvalidArgument(format!(
                "grid size {n} must exceed the polynomial degree {}",
                generator.degree()
            )));
        }
        Ok(Self { n, generator })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn generator(&self) -> &TrigPoly2D {
        &self.generator
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let (bi, k) = (row / self.n, row % self.n);
        let (bj, l) = (col / self.n, col % self.n);
        self.generator.coeff(bj as i64 - bi as i64, l as i64 - k as i64)
    }

    pub fn materialize_with(&self, limits: &Limits) -> Result<DenseMatrix> {
        let dim = self.dim();
        let mut m = DenseMatrix::zeros_capped(dim, dim, limits)?;
        write_dbt(&mut m, 0, 0, &self.generator, self.n);
        Ok(m)
    }
}

pub fn build_dbt(f: &TrigPoly2D, n: usize) -> Result<DenseMatrix> {
    DoublyBlockToeplitz::new(f.clone(), n)?.materialize_with(&Limits::from_env())
}

fn write_dbt(m: &mut DenseMatrix, row0: usize, col0: usize, f: &TrigPoly2D, n: usize) {
    let d = f.degree() as i64;
    let nn = n as i64;
    for bi in 0..nn {
        for bj in (bi - d).max(0)..(bi + d + 1).min(nn) {
            for k in 0..nn {
                for l in (k - d).max(0)..(k + d + 1).min(nn) {
                    let c = f.coeff(bj - bi, l - k);
                    if c != 0.0 {
                        m[(row0 + (bi * nn + k) as usize, col0 + (bj * nn + l) as usize)] = Complex64::new(c, 0.0);
                    }
                }
            }
        }
    }
}

/// The `(cin n^2) x (cout n^2)` matrix whose `(j, i)` block is the doubly-block
/// Toeplitz matrix of `f_ij`. Its transpose applied to the flattened input is
/// [`conv2d`].
pub fn build_conv_matrix(k: &ConvKernel, n: usize) -> Result<DenseMatrix> {
    build_conv_matrix_with(k, n, &Limits::from_env())
}

pub fn build_conv_matrix_with(k: &ConvKernel, n: usize, limits: &Limits) -> Result<DenseMatrix> {
    check_grid(k, n)?;
    let polys = kernel_to_polys(k);
    let block = n * n;
    let mut m = DenseMatrix::zeros_capped(k.cin() * block, k.cout() * block, limits)?;
    for (i, row) in polys.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            write_dbt(&mut m, j * block, i * block, f, n);
        }
    }
    Ok(m)
}

/// Dense `(cout n^2) x (cin n^2)` matrix of [`circular_conv2d`].
pub fn build_circular_conv_matrix(k: &ConvKernel, n: usize, limits: &Limits) -> Result<DenseMatrix> {
    check_grid(k, n)?;
    let (rows, cols) = (k.cout() * n * n, k.cin() * n * n);
    let mut m = DenseMatrix::zeros_capped(rows, cols, limits)?;
    let mut e = vec![0.0; cols];
    for c in 0..cols {
        e[c] = 1.0;
        let y = circular_conv2d(k, &e, n)?;
        e[c] = 0.0;
        for (r, v) in y.into_iter().enumerate() {
            if v != 0.0 {
                m[(r, c)] = Complex64::new(v, 0.0);
            }
        }
    }
    Ok(m)
}

fn check_grid(k: &ConvKernel, n: usize) -> Result<()> {
    if n <= k.degree() {
        return Err(Error::InvalidArgument(format!(
            "input size {n} must exceed the kernel half-width {}",
            k.degree()
        )));
    }
    Ok(())
}

/// `true` when every entry equals the one diagonally up-left of it.
pub fn is_toeplitz(m: &DenseMatrix) -> bool {
    (1..m.rows()).all(|i| (1..m.cols()).all(|j| m[(i, j)] == m[(i - 1, j - 1)]))
}

/// `true` when `m` is block Toeplitz with `b x b` Toeplitz blocks.
pub fn is_doubly_block_toeplitz(m: &DenseMatrix, b: usize) -> bool {
    if b == 0 || m.rows() % b != 0 || m.cols() % b != 0 {
        return false;
    }
    let block = |bi: usize, bj: usize| DenseMatrix::from_fn(b, b, |k, l| m[(bi * b + k, bj * b + l)]);
    let (nr, nc) = (m.rows() / b, m.cols() / b);
    for bi in 0..nr {
        for bj in 0..nc {
            let cur = block(bi, bj);
            if !is_toeplitz(&cur) {
                return false;
            }
            if bi > 0 && bj > 0 && cur != block(bi - 1, bj - 1) {
                return false;
            }
        }
    }
    true
}
