//! LipBound: an upper bound on the largest singular value of a multi-channel
//! convolution from grid maxima of its generating polynomials.
//!
//! ```text
//! sigma_1(M) <= sqrt( sum_i sup_w sum_j |f_ij(w)|^2 )
//! ```
//!
//! The sup is approximated on the grid `{2 pi k / S}^2`. For a polynomial of
//! degree `d` the true sup is at most `1 / (1 - 2d/S)` times the grid maximum;
//! the `corrected` mode applies that factor so the result is a certified bound.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::exact_conv_sigma1;
use crate::limits::Limits;
use crate::toeplitz::{basis, grid_angle, kernel_to_polys, ConvKernel, TrigPoly2D};

/// Number of equidistant samples per frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    samples: usize,
}

impl GridSpec {
    pub fn new(samples: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidGrid("at least one sample per axis is required".into()));
        }
        Ok(Self { samples })
    }

    /// 10 samples for `d <= 1`, `10 d` otherwise, which keeps `alpha <= 0.2`.
    pub fn default_for_degree(d: usize) -> Self {
        Self {
            samples: 10 * d.max(1),
        }
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// `alpha = 2d / S`.
    pub fn alpha(&self, degree: usize) -> f64 {
        2.0 * degree as f64 / self.samples as f64
    }

    /// `1 / (1 - alpha)`, defined only when `S > 2d`.
    pub fn guarantee_factor(&self, degree: usize) -> Result<f64> {
        if self.samples <= 2 * degree {
            return Err(Error::InvalidGrid(format!(
                "{} samples do not exceed 2d = {}, so the grid carries no guarantee",
                self.samples,
                2 * degree
            )));
        }
        Ok(1.0 / (1.0 - self.alpha(degree)))
    }

    pub fn angle(&self, k: usize) -> f64 {
        grid_angle(k, self.samples)
    }

    /// Basis values for every grid point, row-major over `(k1, k2)`.
    fn basis_table(&self, degree: usize) -> Vec<Vec<Complex64>> {
        let s = self.samples;
        (0..s * s)
            .map(|idx| basis(degree, self.angle(idx / s), self.angle(idx % s)))
            .collect()
    }
}

/// Maximum of `|f|` over the grid and the first `(w1, w2)` attaining it.
pub fn polygrid_max(f: &TrigPoly2D, grid: &GridSpec) -> (f64, (f64, f64)) {
    let s = grid.samples;
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    for k1 in 0..s {
        let w1 = grid.angle(k1);
        for k2 in 0..s {
            let w2 = grid.angle(k2);
            let v = f.eval(w1, w2).norm();
            if v > best.0 {
                best = (v, (w1, w2));
            }
        }
    }
    best
}

/// Grid maximum of `sqrt(sum_i |f_i|^2)`, the bound for a stack of doubly-block
/// Toeplitz matrices sharing one output.
pub fn lipbound_mono(polys: &[TrigPoly2D], grid: &GridSpec) -> Result<f64> {
    let first = polys.first().ok_or(Error::Empty("polynomial list"))?;
    let d = first.degree();
    if polys.iter().any(|p| p.degree() != d) {
        return Err(Error::InvalidArgument("polynomials differ in degree".into()));
    }
    let table = grid.basis_table(d);
    let (sq, _) = channel_sup(polys, &table);
    Ok(sq.sqrt())
}

/// Largest grid value of `sum_j |f_j|^2` and its flat grid index; the first
/// index wins ties.
fn channel_sup(polys: &[TrigPoly2D], table: &[Vec<Complex64>]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (idx, b) in table.iter().enumerate() {
        let mut acc = 0.0;
        for p in polys {
            let z = p.eval_with_basis(b);
            acc += z.re * z.re + z.im * z.im;
        }
        if acc > best.0 {
            best = (acc, idx);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipBoundResult {
    pub bound: f64,
    /// Per output channel `sqrt(sup_w sum_j |f_ij|^2)`, including the
    /// correction factor when it was applied.
    pub per_channel_sups: Vec<f64>,
    /// Per output channel uncorrected grid maxima of `sqrt(sum_j |f_ij|^2)`.
    pub grid_max_raw: Vec<f64>,
    pub argmax_points: Vec<(f64, f64)>,
    pub samples: usize,
    pub corrected: bool,
    pub guarantee_factor: Option<f64>,
}

pub fn lipbound(k: &ConvKernel, grid: &GridSpec, corrected: bool) -> Result<LipBoundResult> {
    let d = k.degree();
    let factor = grid.guarantee_factor(d);
    let scale = if corrected { factor.clone()?.powi(2) } else { 1.0 };
    let polys = kernel_to_polys(k);
    let table = grid.basis_table(d);
    let s = grid.samples;
    let sups: Vec<(f64, usize)> = polys.par_iter().map(|row| channel_sup(row, &table)).collect();

    let mut total = 0.0;
    for (sq, _) in &sups {
        total += sq * scale;
    }
    Ok(LipBoundResult {
        bound: total.sqrt(),
        per_channel_sups: sups.iter().map(|(sq, _)| (sq * scale).sqrt()).collect(),
        grid_max_raw: sups.iter().map(|(sq, _)| sq.sqrt()).collect(),
        argmax_points: sups
            .iter()
            .map(|&(_, idx)| (grid.angle(idx / s), grid.angle(idx % s)))
            .collect(),
        samples: s,
        corrected,
        guarantee_factor: factor.ok(),
    })
}

/// `LipBound(K) - sigma_1(M(n))` with the exact value from a dense
/// decomposition of the materialized operator.
pub fn gamma_gap(k: &ConvKernel, n: usize, grid: &GridSpec, corrected: bool) -> Result<f64> {
    gamma_gap_with(k, n, grid, corrected, &Limits::from_env())
}

pub fn gamma_gap_with(k: &ConvKernel, n: usize, grid: &GridSpec, corrected: bool, limits: &Limits) -> Result<f64> {
    let bound = lipbound(k, grid, corrected)?.bound;
    Ok(bound - exact_conv_sigma1(k, n, limits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use std::f64::consts::PI;

    fn all_ones_kernel() -> ConvKernel {
        ConvKernel::same(1, 1, 3, vec![1.0; 9]).unwrap()
    }

    #[test]
    fn constant_poly() {
        let (v, at) = polygrid_max(&TrigPoly2D::constant(3.0), &GridSpec::new(7).unwrap());
        assert_eq!(v, 3.0);
        assert_eq!(at, (0.0, 0.0));
    }

    #[test]
    fn all_ones_grid_max() {
        let f = TrigPoly2D::new(1, vec![1.0; 9]).unwrap();
        let (v, at) = polygrid_max(&f, &GridSpec::new(10).unwrap());
        assert!((v - 9.0).abs() < 1e-12);
        assert_eq!(at, (0.0, 0.0));
    }

    #[test]
    fn guarantee_factor_values() {
        let g = GridSpec::new(10).unwrap();
        assert!((g.alpha(1) - 0.2).abs() < 1e-15);
        assert!((g.guarantee_factor(1).unwrap() - 1.25).abs() < 1e-15);
        assert!(GridSpec::new(2).unwrap().guarantee_factor(1).is_err());
        assert!(GridSpec::new(0).is_err());
        assert_eq!(GridSpec::default_for_degree(2).samples(), 20);
        assert_eq!(GridSpec::default_for_degree(0).samples(), 10);
    }

    #[test]
    fn mono_is_joint_sup() {
        let g = GridSpec::new(10).unwrap();
        assert_eq!(lipbound_mono(&[TrigPoly2D::constant(-4.0)], &g).unwrap(), 4.0);
        let v = lipbound_mono(&[TrigPoly2D::constant(3.0), TrigPoly2D::constant(4.0)], &g).unwrap();
        assert!((v - 5.0).abs() < 1e-15);
        assert!(lipbound_mono(&[], &g).is_err());
        assert!(lipbound_mono(&[TrigPoly2D::zeros(1), TrigPoly2D::zeros(2)], &g).is_err());
    }

    #[test]
    fn delta_and_all_ones() {
        let g = GridSpec::new(10).unwrap();
        assert_eq!(lipbound(&ConvKernel::delta(3).unwrap(), &g, false).unwrap().bound, 1.0);
        assert_eq!(lipbound(&all_ones_kernel(), &g, false).unwrap().bound, 9.0);
        let c = lipbound(&all_ones_kernel(), &g, true).unwrap();
        assert!((c.bound - 9.0 * 1.25).abs() < 1e-12);
        assert_eq!(c.grid_max_raw, vec![9.0]);
    }

    #[test]
    fn corrected_requires_enough_samples() {
        let g = GridSpec::new(2).unwrap();
        assert!(lipbound(&all_ones_kernel(), &g, true).is_err());
        assert!(lipbound(&all_ones_kernel(), &g, false).is_ok());
    }

    #[test]
    fn argmax_tie_break_is_lexicographic() {
        // Constant modulus on the grid, so the first point wins.
        let k = ConvKernel::new(2, 1, 1, 0, vec![2.0, -3.0]).unwrap();
        let r = lipbound(&k, &GridSpec::new(10).unwrap(), false).unwrap();
        assert_eq!(r.argmax_points, vec![(0.0, 0.0), (0.0, 0.0)]);
        assert!((r.bound - 13f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn argmax_locates_peak() {
        // f = 1 - cos(w1) peaks at w1 = pi.
        let mut f = TrigPoly2D::zeros(1);
        f.set_coeff(0, 0, 1.0);
        f.set_coeff(1, 0, -0.5);
        f.set_coeff(-1, 0, -0.5);
        let (v, at) = polygrid_max(&f, &GridSpec::new(10).unwrap());
        assert!((v - 2.0).abs() < 1e-12);
        assert!((at.0 - PI).abs() < 1e-12 && at.1 == 0.0);
    }

    #[test]
    fn bound_aggregates_channels() {
        let mut rng = seeded(4);
        let k = ConvKernel::random_normal(3, 2, 3, 1, 1.0, &mut rng).unwrap();
        let r = lipbound(&k, &GridSpec::new(10).unwrap(), false).unwrap();
        let agg: f64 = r.per_channel_sups.iter().map(|s| s * s).sum::<f64>().sqrt();
        assert!((agg - r.bound).abs() < 1e-12 * r.bound);
        assert_eq!(r.per_channel_sups, r.grid_max_raw);
    }

    #[test]
    fn gamma_of_delta_is_zero() {
        let g = GridSpec::new(10).unwrap();
        for n in [4, 8] {
            assert!(gamma_gap(&ConvKernel::delta(3).unwrap(), n, &g, false).unwrap().abs() < 1e-12);
        }
    }
}
