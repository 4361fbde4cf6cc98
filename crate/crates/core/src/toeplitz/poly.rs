use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `f(w1, w2) = sum_{|h1|,|h2| <= d} c[h1, h2] exp(i (h1 w1 + h2 w2))` with real
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly2D {
    degree: usize,
    coeffs: Vec<f64>,
}

impl TrigPoly2D {
    /// `coeffs` is row-major over `(h1, h2)`, both running `-d..=d`.
    pub fn new(degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        let side = 2 * degree + 1;
        if coeffs.len() != side * side {
            return Err(Error::DimensionMismatch {
                expected: side * side,
                got: coeffs.len(),
            });
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {bad}")));
        }
        Ok(Self { degree, coeffs })
    }

    pub fn zeros(degree: usize) -> Self {
        let side = 2 * degree + 1;
        Self {
            degree,
            coeffs: vec![0.0; side * side],
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            degree: 0,
            coeffs: vec![value],
        }
    }

    pub fn from_fn(degree: usize, mut f: impl FnMut(i64, i64) -> f64) -> Self {
        let d = degree as i64;
        let coeffs = (-d..=d).flat_map(|h1| (-d..=d).map(move |h2| (h1, h2))).map(|(a, b)| f(a, b)).collect();
        Self { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn side(&self) -> usize {
        2 * self.degree + 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient at `(h1, h2)`, zero outside the band.
    pub fn coeff(&self, h1: i64, h2: i64) -> f64 {
        let d = self.degree as i64;
        if h1.abs() > d || h2.abs() > d {
            return 0.0;
        }
        self.coeffs[((h1 + d) as usize) * self.side() + (h2 + d) as usize]
    }

    pub fn set_coeff(&mut self, h1: i64, h2: i64, value: f64) {
        let d = self.degree as i64;
        let side = self.side();
        self.coeffs[((h1 + d) as usize) * side + (h2 + d) as usize] = value;
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn eval(&self, w1: f64, w2: f64) -> Complex64 {
        eval_poly(self, w1, w2)
    }

    pub(crate) fn eval_with_basis(&self, basis: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, b) in self.coeffs.iter().zip(basis) {
            acc += b * *c;
        }
        acc
    }
}

/// `exp(i (h1 w1 + h2 w2))` for all `(h1, h2)` in the band, in coefficient order.
pub(crate) fn basis(degree: usize, w1: f64, w2: f64) -> Vec<Complex64> {
    let d = degree as i64;
    let mut out = Vec::with_capacity((2 * degree + 1).pow(2));
    for h1 in -d..=d {
        for h2 in -d..=d {
            out.push(Complex64::cis(h1 as f64 * w1 + h2 as f64 * w2));
        }
    }
    out
}

/// Evaluates `f` with `h1` outer and `h2` inner, both ascending, so the result
/// is bit-stable across call sites.
pub fn eval_poly(f: &TrigPoly2D, w1: f64, w2: f64) -> Complex64 {
    f.eval_with_basis(&basis(f.degree, w1, w2))
}

/// `2 pi k / samples`.
pub(crate) fn grid_angle(k: usize, samples: usize) -> f64 {
    2.0 * PI * k as f64 / samples as f64
}
