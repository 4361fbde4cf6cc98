//! Circulant, diagonal and f-circulant matrices.
//!
//! Convention used throughout the crate: a circulant matrix is stored by its
//! first **column** `c`, so `[C]_{j,k} = c[(j - k) mod n]`. With the forward DFT
//! `X_k = sum_j x_j exp(-2 pi i jk/n)` the eigenvalues are `fft(c)` and
//! `C x = ifft(fft(c) * fft(x))`.

use num_complex::Complex64;

use crate::dense::{check_len, ComplexVector, DenseMatrix, ZERO};
use crate::error::Result;
use crate::fft;
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantMatrix {
    column: ComplexVector,
}

impl CirculantMatrix {
    pub fn new(first_column: ComplexVector) -> Self {
        Self {
            column: first_column,
        }
    }

    pub fn from_real(first_column: &[f64]) -> Result<Self> {
        Ok(Self::new(ComplexVector::from_real(first_column)?))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self::new(ComplexVector::unit(n, 0)?))
    }

    /// Inverse of [`CirculantMatrix::eigenvalues`].
    pub fn from_eigenvalues(eigenvalues: &ComplexVector) -> Self {
        Self::new(ComplexVector::new(fft::ifft(eigenvalues)).expect("non-empty"))
    }

    pub fn dim(&self) -> usize {
        self.column.len()
    }

    pub fn first_column(&self) -> &ComplexVector {
        &self.column
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        let n = self.dim();
        self.column[(j + n - k % n) % n]
    }

    /// `C x` in `O(n log n)`.
    pub fn apply(&self, x: &[Complex64]) -> Result<ComplexVector> {
        check_len(self.dim(), x.len())?;
        let mut spectrum = fft::fft(&self.column);
        let xf = fft::fft(x);
        for (s, v) in spectrum.iter_mut().zip(&xf) {
            *s *= v;
        }
        fft::ifft_in_place(&mut spectrum);
        ComplexVector::new(spectrum)
    }

    /// `lambda_k = sum_j c_j exp(-2 pi i jk/n)`, ordered by `k`.
    pub fn eigenvalues(&self) -> ComplexVector {
        ComplexVector::new(fft::fft(&self.column)).expect("non-empty")
    }

    /// Product `self * other`; spectra multiply.
    pub fn mul(&self, other: &CirculantMatrix) -> Result<CirculantMatrix> {
        check_len(self.dim(), other.dim())?;
        let spectrum = self.eigenvalues().hadamard(&other.eigenvalues())?;
        Ok(Self::from_eigenvalues(&spectrum))
    }

    pub fn add(&self, other: &CirculantMatrix) -> Result<CirculantMatrix> {
        Ok(Self::new(self.column.add(&other.column)?))
    }

    /// Conjugate transpose, again circulant: `c'_j = conj(c_{-j mod n})`.
    pub fn adjoint(&self) -> CirculantMatrix {
        let n = self.dim();
        let col = (0..n).map(|j| self.column[(n - j) % n].conj()).collect();
        Self::new(ComplexVector::new(col).expect("non-empty"))
    }

    pub fn materialize(&self) -> Result<DenseMatrix> {
        self.materialize_with(&Limits::default())
    }

    pub fn materialize_with(&self, limits: &Limits) -> Result<DenseMatrix> {
        let n = self.dim();
        limits.check_structured_dim(n)?;
        Ok(DenseMatrix::from_fn(n, n, |j, k| self.entry(j, k)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMatrix {
    diag: ComplexVector,
}

impl DiagonalMatrix {
    pub fn new(diag: ComplexVector) -> Self {
        Self { diag }
    }

    pub fn from_real(diag: &[f64]) -> Result<Self> {
        Ok(Self::new(ComplexVector::from_real(diag)?))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Ok(Self::new(ComplexVector::ones(n)?))
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &ComplexVector {
        &self.diag
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<ComplexVector> {
        check_len(self.dim(), x.len())?;
        ComplexVector::new(self.diag.iter().zip(x).map(|(d, v)| d * v).collect())
    }

    pub fn mul(&self, other: &DiagonalMatrix) -> Result<DiagonalMatrix> {
        Ok(Self::new(self.diag.hadamard(&other.diag)?))
    }

    pub fn adjoint(&self) -> DiagonalMatrix {
        Self::new(self.diag.conj())
    }

    pub fn materialize(&self) -> Result<DenseMatrix> {
        self.materialize_with(&Limits::default())
    }

    pub fn materialize_with(&self, limits: &Limits) -> Result<DenseMatrix> {
        let n = self.dim();
        limits.check_structured_dim(n)?;
        Ok(DenseMatrix::from_fn(n, n, |j, k| if j == k { self.diag[j] } else { ZERO }))
    }
}

/// `Z_f(x)`: lower triangle as in a circulant, strictly upper band scaled by `f`.
///
/// `[Z_f(x)]_{j,k} = x_{j-k}` for `j >= k` and `f x_{n+j-k}` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct FCirculantMatrix {
    generator: ComplexVector,
    f: Complex64,
}

impl FCirculantMatrix {
    pub fn new(generator: ComplexVector, f: Complex64) -> Self {
        Self { generator, f }
    }

    /// The f-unit-circulant `Z_f`, generated by `e_1`.
    pub fn unit(n: usize, f: Complex64) -> Result<Self> {
        let generator = if n == 1 {
            // Z_f for n = 1 is the 1x1 matrix [f].
            ComplexVector::new(vec![f])?
        } else {
            ComplexVector::unit(n, 1)?
        };
        Ok(Self::new(generator, f))
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &ComplexVector {
        &self.generator
    }

    pub fn f(&self) -> Complex64 {
        self.f
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        let n = self.dim();
        if j >= k {
            self.generator[j - k]
        } else {
            self.f * self.generator[n + j - k]
        }
    }

    /// `Z_f(x) v`.
    ///
    /// For `f != 0`, `Z_f(x) = G^{-1} circ(G x) G` with `G = diag(g^j)` and
    /// `g^n = f`, which gives an `O(n log n)` product. `f = 0` (lower-triangular
    /// Toeplitz) falls back to the direct sum.
    pub fn apply(&self, v: &[Complex64]) -> Result<ComplexVector> {
        let n = self.dim();
        check_len(n, v.len())?;
        if self.f == ZERO {
            let out = (0..n)
                .map(|j| (0..=j).map(|k| self.generator[j - k] * v[k]).sum())
                .collect();
            return ComplexVector::new(out);
        }
        let g = self.f.powf(1.0 / n as f64);
        let powers: Vec<Complex64> = (0..n).map(|j| g.powu(j as u32)).collect();
        let scaled_gen: Vec<Complex64> = self.generator.iter().zip(&powers).map(|(x, p)| x * p).collect();
        let scaled_v: Vec<Complex64> = v.iter().zip(&powers).map(|(x, p)| x * p).collect();
        let circ = CirculantMatrix::new(ComplexVector::new(scaled_gen)?);
        let y = circ.apply(&scaled_v)?;
        ComplexVector::new(y.iter().zip(&powers).map(|(y, p)| y / p).collect())
    }

    pub fn materialize(&self) -> Result<DenseMatrix> {
        self.materialize_with(&Limits::default())
    }

    pub fn materialize_with(&self, limits: &Limits) -> Result<DenseMatrix> {
        let n = self.dim();
        limits.check_structured_dim(n)?;
        Ok(DenseMatrix::from_fn(n, n, |j, k| self.entry(j, k)))
    }
}
