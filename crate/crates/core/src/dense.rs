//! Complex vector and dense matrix containers.
//!
//! Every structured type in the crate materializes into [`DenseMatrix`], and the
//! dense oracles (SVD, eigenvalues, linear solves) are backed by `faer`.

use std::ops::{Deref, Index, IndexMut};

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits::Limits;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Non-empty vector of double-precision complex scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty("complex vector"));
        }
        Ok(Self(data))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![ZERO; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![ONE; n])
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::InvalidArgument(format!("unit index {i} out of range for length {n}")));
        }
        let mut v = vec![ZERO; n];
        v[i] = ONE;
        Self::new(v)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.0)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * factor).collect())
    }

    /// `max_i |a_i - b_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Deref for ComplexVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl TryFrom<Vec<Complex64>> for ComplexVector {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    /// Zero matrix, refusing allocations above the byte cap.
    pub fn zeros_capped(rows: usize, cols: usize, limits: &Limits) -> Result<Self> {
        limits.check_elements("dense matrix", rows as u128 * cols as u128, 16)?;
        Ok(Self::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_len(c, row.len())?;
            data.extend(row.iter().map(|&v| Complex64::new(v, 0.0)));
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self^H x`.
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.rows, x.len())?;
        let mut y = vec![ZERO; self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj += a.conj() * xi;
            }
        }
        Ok(y)
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_len(self.cols, other.rows)?;
        let product = self.to_faer() * other.to_faer();
        Ok(Self::from_faer(product.as_ref()))
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> DenseMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &DenseMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<DenseMatrix> {
        check_len(self.rows, other.rows)?;
        check_len(self.cols, other.cols)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    /// `||self - other||_F / max(||other||_F, tiny)`.
    pub fn relative_frobenius_error(&self, reference: &DenseMatrix) -> Result<f64> {
        let diff = self.sub(reference)?.frobenius_norm();
        let scale = reference.frobenius_norm();
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }

    /// Largest row sum of entry moduli (the norm induced by the max norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Empty("matrix"));
        }
        if self.is_real() {
            self.to_faer_real()
                .singular_values()
                .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))
        } else {
            self.to_faer()
                .singular_values()
                .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))
        }
    }

    /// Thin SVD `self = U diag(s) V^H`, singular values nonincreasing.
    pub fn svd(&self) -> Result<Svd> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Empty("matrix"));
        }
        let svd = self
            .to_faer()
            .thin_svd()
            .map_err(|e| Error::Numerical(format!("svd did not converge: {e:?}")))?;
        Ok(Svd {
            u: Self::from_faer(svd.U()),
            s: svd.S().column_vector().iter().map(|z| z.re).collect(),
            v: Self::from_faer(svd.V()),
        })
    }

    /// Largest singular value.
    ///
    /// Small operators go through a full SVD. Larger ones go through the
    /// eigenvalues of the Gram matrix on the smaller side, which is accurate to
    /// machine precision relative to `sigma_1` and several times cheaper.
    pub fn sigma_max(&self) -> Result<f64> {
        let small = self.rows.min(self.cols);
        if small == 0 {
            return Err(Error::Empty("matrix"));
        }
        if small <= 256 {
            return Ok(self.singular_values()?[0]);
        }
        let top = if self.is_real() {
            let a = self.to_faer_real();
            let gram = if self.rows <= self.cols {
                &a * a.transpose()
            } else {
                a.transpose() * &a
            };
            let eig = gram
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))?;
            eig.last().copied().unwrap_or(0.0)
        } else {
            let a = self.to_faer();
            let gram = if self.rows <= self.cols {
                &a * a.adjoint()
            } else {
                a.adjoint() * &a
            };
            let eig = gram
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))?;
            eig.last().copied().unwrap_or(0.0)
        };
        Ok(top.max(0.0).sqrt())
    }

    /// Eigenvalues of a square matrix, in solver order.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        self.to_faer()
            .eigenvalues()
            .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))
    }

    /// Eigenvalues with matching right eigenvectors stored as columns.
    pub fn eigen(&self) -> Result<(Vec<Complex64>, DenseMatrix)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let evd = self
            .to_faer()
            .eigen()
            .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))?;
        let values = evd.S().column_vector().iter().copied().collect();
        Ok((values, Self::from_faer(evd.U())))
    }

    /// Solves `self x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        check_len(self.rows, b.len())?;
        let lu = self.to_faer().partial_piv_lu();
        let rhs = Mat::<Complex64>::from_fn(b.len(), 1, |i, _| b[i]);
        let x = lu.solve(&rhs);
        let x: Vec<Complex64> = (0..b.len()).map(|i| x[(i, 0)]).collect();
        if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("singular linear system".into()));
        }
        Ok(x)
    }

    pub(crate) fn to_faer(&self) -> Mat<Complex64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn to_faer_real(&self) -> Mat<f64> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re)
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}
