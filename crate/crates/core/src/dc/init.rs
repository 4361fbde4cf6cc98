//! Random initialization of one diagonal-circulant layer `y = D C x + bias`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::dense::ComplexVector;
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::structured::{CirculantMatrix, DiagonalMatrix};

/// One draw of the layer parameters.
///
/// `c` is real i.i.d. `N(0, 2/n)`, `d` is uniform on `{-1, +1}` and the bias is
/// real i.i.d. `N(0, alpha'^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DCInitSample {
    pub c: ComplexVector,
    pub d: ComplexVector,
    pub bias: ComplexVector,
    pub bias_scale: f64,
}

impl DCInitSample {
    pub fn circulant(&self) -> CirculantMatrix {
        CirculantMatrix::new(self.c.clone())
    }

    pub fn diagonal(&self) -> DiagonalMatrix {
        DiagonalMatrix::new(self.d.clone())
    }

    /// `D C x + bias`.
    pub fn apply(&self, x: &[Complex64]) -> Result<ComplexVector> {
        let y = self.diagonal().apply(&self.circulant().apply(x)?)?;
        y.add(&self.bias)
    }
}

pub fn sample_dc_init(n: usize, bias_scale: f64, seed: u64) -> Result<DCInitSample> {
    if n == 0 {
        return Err(Error::Empty("layer width"));
    }
    if !(bias_scale >= 0.0 && bias_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("bias scale must be finite and nonnegative, got {bias_scale}")));
    }
    let mut rng = seeded(seed);
    let weight = Normal::new(0.0, (2.0 / n as f64).sqrt()).expect("positive std");
    let c: Vec<f64> = (0..n).map(|_| weight.sample(&mut rng)).collect();
    let d: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let bias: Vec<f64> = if bias_scale > 0.0 {
        let dist = Normal::new(0.0, bias_scale).expect("positive std");
        (0..n).map(|_| dist.sample(&mut rng)).collect()
    } else {
        vec![0.0; n]
    };
    Ok(DCInitSample {
        c: ComplexVector::from_real(&c)?,
        d: ComplexVector::from_real(&d)?,
        bias: ComplexVector::from_real(&bias)?,
        bias_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_one() {
        let s = sample_dc_init(1, 0.0, 3).unwrap();
        assert_eq!(s.c.len(), 1);
        assert!(s.d[0].re.abs() == 1.0 && s.d[0].im == 0.0);
        assert_eq!(s.bias[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(sample_dc_init(16, 0.1, 42).unwrap(), sample_dc_init(16, 0.1, 42).unwrap());
        assert_ne!(sample_dc_init(16, 0.1, 42).unwrap(), sample_dc_init(16, 0.1, 43).unwrap());
    }

    #[test]
    fn signs_are_exact() {
        let s = sample_dc_init(64, 0.0, 5).unwrap();
        assert!(s.d.iter().all(|z| (z.re == 1.0 || z.re == -1.0) && z.im == 0.0));
    }

    #[test]
    fn weight_variance() {
        let n = 8;
        let draws = 20_000;
        let mut sum_sq = 0.0;
        for seed in 0..draws {
            let s = sample_dc_init(n, 0.0, seed).unwrap();
            sum_sq += s.c.iter().map(|z| z.re * z.re).sum::<f64>();
        }
        let var = sum_sq / (draws as f64 * n as f64);
        let expected = 2.0 / n as f64;
        assert!((var / expected - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn rejects_bad_args() {
        assert!(sample_dc_init(0, 0.0, 1).is_err());
        assert!(sample_dc_init(4, -1.0, 1).is_err());
    }
}
