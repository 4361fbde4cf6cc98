//! Diagonal-circulant (DC) products.
//!
//! A [`DCFactorization`] is an ordered product `A_1 A_2 ... A_m` of alternating
//! diagonal and circulant factors. [`decompose_rank`] builds one with `4k + 1`
//! factors for any rank-`k` matrix; [`fold_biases`] and [`sample_dc_init`] cover
//! the neural-network side (ReLU bias folding and the DC initialization).

mod bias;
mod init;
mod rank;

pub use bias::{complex_relu, fold_biases, FoldedBiasChain};
pub use init::{sample_dc_init, DCInitSample};
pub use rank::{decompose_rank, decompose_rank_real, decompose_rank_with_tol, DEFAULT_RECONSTRUCTION_TOL};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dense::{check_len, ComplexVector, DenseMatrix};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::structured::{CirculantMatrix, DiagonalMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Diagonal(DiagonalMatrix),
    Circulant(CirculantMatrix),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Diagonal(d) => d.dim(),
            Factor::Circulant(c) => c.dim(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Factor::Diagonal(_))
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<ComplexVector> {
        match self {
            Factor::Diagonal(d) => d.apply(x),
            Factor::Circulant(c) => c.apply(x),
        }
    }

    pub fn adjoint(&self) -> Factor {
        match self {
            Factor::Diagonal(d) => Factor::Diagonal(d.adjoint()),
            Factor::Circulant(c) => Factor::Circulant(c.adjoint()),
        }
    }

    pub fn materialize_with(&self, limits: &Limits) -> Result<DenseMatrix> {
        match self {
            Factor::Diagonal(d) => d.materialize_with(limits),
            Factor::Circulant(c) => c.materialize_with(limits),
        }
    }
}

/// Product of alternating diagonal / circulant factors, all `n x n`.
///
/// `factors[0]` is the leftmost factor, so applying the product to a vector
/// runs through the list back to front.
#[derive(Debug, Clone, PartialEq)]
pub struct DCFactorization {
    n: usize,
    factors: Vec<Factor>,
    target_rank: Option<usize>,
    reconstruction_error: Option<f64>,
}

impl DCFactorization {
    /// Builds a product from `factors`, rejecting mixed dimensions and two
    /// adjacent factors of the same kind.
    pub fn new(n: usize, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            check_len(n, f.dim())?;
        }
        if let Some(i) = factors.windows(2).position(|w| w[0].is_diagonal() == w[1].is_diagonal()) {
            return Err(Error::InvalidArgument(format!(
                "factors {i} and {} are both {}",
                i + 1,
                if factors[i].is_diagonal() { "diagonal" } else { "circulant" }
            )));
        }
        Ok(Self {
            n,
            factors,
            target_rank: None,
            reconstruction_error: None,
        })
    }

    pub(crate) fn with_target_rank(mut self, k: usize) -> Self {
        self.target_rank = Some(k);
        self
    }

    pub(crate) fn with_reconstruction_error(mut self, err: f64) -> Self {
        self.reconstruction_error = Some(err);
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The rank this product was built for, when it came from [`decompose_rank`].
    pub fn target_rank(&self) -> Option<usize> {
        self.target_rank
    }

    /// Relative Frobenius error against the rank-`k` truncation, when known.
    pub fn reconstruction_error(&self) -> Option<f64> {
        self.reconstruction_error
    }

    /// `A_1 ... A_m x` in `O(m n log n)`.
    pub fn apply(&self, x: &[Complex64]) -> Result<ComplexVector> {
        check_len(self.n, x.len())?;
        let mut y = ComplexVector::new(x.to_vec())?;
        for f in self.factors.iter().rev() {
            y = f.apply(&y)?;
        }
        Ok(y)
    }

    /// Dense product of all factors; the identity for an empty list.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_dense_with(&Limits::default())
    }

    /// Applies the product to every basis vector, `O(m n^2 log n)`.
    pub fn to_dense_with(&self, limits: &Limits) -> Result<DenseMatrix> {
        limits.check_structured_dim(self.n)?;
        let n = self.n;
        limits.check_elements("dc product", (n as u128) * (n as u128), 16)?;
        let columns: Vec<ComplexVector> = (0..n)
            .into_par_iter()
            .map(|c| self.apply(&ComplexVector::unit(n, c)?))
            .collect::<Result<_>>()?;
        Ok(DenseMatrix::from_fn(n, n, |i, j| columns[j][i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_identity() {
        let f = DCFactorization::new(3, vec![]).unwrap();
        let x = ComplexVector::from_real(&[1.0, -2.0, 3.5]).unwrap();
        assert_eq!(f.apply(&x).unwrap(), x);
        assert_eq!(f.to_dense().unwrap(), DenseMatrix::identity(3));
    }

    #[test]
    fn identity_pair_is_identity() {
        let f = DCFactorization::new(
            4,
            vec![
                Factor::Diagonal(DiagonalMatrix::identity(4).unwrap()),
                Factor::Circulant(CirculantMatrix::identity(4).unwrap()),
            ],
        )
        .unwrap();
        let x = ComplexVector::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(f.apply(&x).unwrap().max_abs_diff(&x).unwrap() < 1e-14);
    }

    #[test]
    fn rejects_non_alternating_and_mismatched() {
        let d = Factor::Diagonal(DiagonalMatrix::identity(2).unwrap());
        assert!(DCFactorization::new(2, vec![d.clone(), d.clone()]).is_err());
        assert!(DCFactorization::new(3, vec![d]).is_err());
    }

    #[test]
    fn apply_matches_dense_product() {
        let d = DiagonalMatrix::from_real(&[1.0, -2.0, 0.5]).unwrap();
        let c = CirculantMatrix::from_real(&[0.0, 1.0, 3.0]).unwrap();
        let f = DCFactorization::new(
            3,
            vec![Factor::Circulant(c.clone()), Factor::Diagonal(d), Factor::Circulant(c)],
        )
        .unwrap();
        let x = ComplexVector::from_real(&[0.2, 1.0, -1.0]).unwrap();
        let dense = f.to_dense().unwrap().matvec(&x).unwrap();
        assert!(f.apply(&x).unwrap().max_abs_diff(&ComplexVector::new(dense).unwrap()).unwrap() < 1e-12);
    }
}
