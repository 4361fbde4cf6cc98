//! Folding a single output bias into a ReLU chain of linear layers.

use num_complex::Complex64;

use crate::dense::{check_len, ComplexVector, DenseMatrix};
use crate::error::{Error, Result};

/// `max(0, Re z) + i max(0, Im z)`, elementwise.
pub fn complex_relu(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|v| Complex64::new(v.re.max(0.0), v.im.max(0.0))).collect()
}

/// Biases `c^(1..p)` such that `rho(W^p c.. rho(W^1 x + c^1) ..)` equals
/// `rho(W^p ... W^1 x + b)` on a box of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedBiasChain {
    weights: Vec<DenseMatrix>,
    biases: Vec<ComplexVector>,
    output_bias: ComplexVector,
    shift: Complex64,
}

impl FoldedBiasChain {
    pub fn biases(&self) -> &[ComplexVector] {
        &self.biases
    }

    /// The constant `Xi` every hidden pre-activation is offset by.
    pub fn shift(&self) -> Complex64 {
        self.shift
    }

    pub fn weights(&self) -> &[DenseMatrix] {
        &self.weights
    }

    /// Layer by layer with a complex ReLU after every layer.
    pub fn eval_layerwise(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut h = x.to_vec();
        for (w, c) in self.weights.iter().zip(&self.biases) {
            let pre: Vec<Complex64> = w.matvec(&h)?.iter().zip(c.iter()).map(|(a, b)| a + b).collect();
            h = complex_relu(&pre);
        }
        Ok(h)
    }

    /// `rho(W^p ... W^1 x + b)`.
    pub fn eval_collapsed(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut h = x.to_vec();
        for w in &self.weights {
            h = w.matvec(&h)?;
        }
        let pre: Vec<Complex64> = h.iter().zip(self.output_bias.iter()).map(|(a, b)| a + b).collect();
        Ok(complex_relu(&pre))
    }
}

/// Builds the folded chain for inputs with `|Re x_t|, |Im x_t| <= x_bound`.
///
/// `Xi = xi (1 + i)` with `xi = sqrt(2) x_bound max_j prod_{i<=j} ||W^(i)||_inf`,
/// which dominates every partial product's output on the box.
/// Then `c^1 = Xi 1`, `c^(j+1) = Xi 1 - W^(j+1) Xi 1`, and
/// `c^p = b - W^p Xi 1`, so each hidden composite equals `W(j) x + Xi 1`.
pub fn fold_biases(weights: &[DenseMatrix], b: &ComplexVector, x_bound: f64) -> Result<FoldedBiasChain> {
    if weights.is_empty() {
        return Err(Error::Empty("weight chain"));
    }
    if !(x_bound >= 0.0 && x_bound.is_finite()) {
        return Err(Error::InvalidArgument(format!("input bound must be finite and nonnegative, got {x_bound}")));
    }
    let n = b.len();
    for w in weights {
        if !w.is_square() {
            return Err(Error::DimensionMismatch {
                expected: w.rows(),
                got: w.cols(),
            });
        }
        check_len(n, w.rows())?;
    }

    let mut prod = 1.0;
    let mut worst: f64 = 0.0;
    for w in weights {
        prod *= w.inf_norm();
        worst = worst.max(prod);
    }
    let xi = std::f64::consts::SQRT_2 * x_bound * worst;
    let shift = Complex64::new(xi, xi);
    let ones_shift = vec![shift; n];

    let p = weights.len();
    let mut biases = Vec::with_capacity(p);
    if p == 1 {
        biases.push(b.clone());
    } else {
        biases.push(ComplexVector::new(ones_shift.clone())?);
        for (j, w) in weights.iter().enumerate().skip(1) {
            let pushed = w.matvec(&ones_shift)?;
            let target = if j + 1 == p { b.as_slice() } else { &ones_shift[..] };
            let c: Vec<Complex64> = target.iter().zip(&pushed).map(|(t, q)| t - q).collect();
            biases.push(ComplexVector::new(c)?);
        }
    }
    Ok(FoldedBiasChain {
        weights: weights.to_vec(),
        biases,
        output_bias: b.clone(),
        shift,
    })
}
