use rand::Rng;
use rand_distr::StandardNormal;

use super::poly::TrigPoly2D;
use crate::error::{Error, Result};

/// Real `cout x cin x s x s` convolution kernel with symmetric zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvKernel {
    cout: usize,
    cin: usize,
    s: usize,
    padding: usize,
    data: Vec<f64>,
}

impl ConvKernel {
    /// `data` is row-major over `(out, in, a, b)`. `s` must be odd and
    /// `padding <= s - 1`.
    pub fn new(cout: usize, cin: usize, s: usize, padding: usize, data: Vec<f64>) -> Result<Self> {
        if cout == 0 || cin == 0 || s == 0 {
            return Err(Error::InvalidKernel(format!(
                "dimensions must be positive, got cout={cout} cin={cin} s={s}"
            )));
        }
        if s % 2 == 0 {
            return Err(Error::InvalidKernel(format!("spatial size must be odd, got {s}")));
        }
        if padding > s - 1 {
            return Err(Error::InvalidKernel(format!(
                "padding {padding} exceeds s - 1 = {}",
                s - 1
            )));
        }
        let expected = cout * cin * s * s;
        if data.len() != expected {
            return Err(Error::InvalidKernel(format!(
                "expected {expected} values for {cout}x{cin}x{s}x{s}, got {}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidKernel(format!("non-finite value at flat index {pos}")));
        }
        Ok(Self {
            cout,
            cin,
            s,
            padding,
            data,
        })
    }

    /// Kernel with "same" padding `s / 2`.
    pub fn same(cout: usize, cin: usize, s: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(cout, cin, s, s / 2, data)
    }

    /// Single-channel identity convolution of size `s`.
    pub fn delta(s: usize) -> Result<Self> {
        let mut data = vec![0.0; s * s];
        data[(s / 2) * s + s / 2] = 1.0;
        Self::same(1, 1, s, data)
    }

    pub fn from_fn(
        cout: usize,
        cin: usize,
        s: usize,
        padding: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(cout * cin * s * s);
        for i in 0..cout {
            for j in 0..cin {
                for a in 0..s {
                    for b in 0..s {
                        data.push(f(i, j, a, b));
                    }
                }
            }
        }
        Self::new(cout, cin, s, padding, data)
    }

    /// I.i.d. `N(0, std^2)` entries.
    pub fn random_normal<R: Rng + ?Sized>(
        cout: usize,
        cin: usize,
        s: usize,
        padding: usize,
        std: f64,
        rng: &mut R,
    ) -> Result<Self> {
        Self::from_fn(cout, cin, s, padding, |_, _, _, _| std * rng.sample::<f64, _>(StandardNormal))
    }

    pub fn cout(&self) -> usize {
        self.cout
    }

    pub fn cin(&self) -> usize {
        self.cin
    }

    pub fn size(&self) -> usize {
        self.s
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    /// Degree `d = s / 2` of the generating polynomials.
    pub fn degree(&self) -> usize {
        self.s / 2
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn at(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        self.data[((i * self.cin + j) * self.s + a) * self.s + b]
    }

    /// The `s x s` slice for output `i`, input `j`.
    pub fn slice(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.cin + j) * self.s * self.s;
        &self.data[start..start + self.s * self.s]
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            data: self.data.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Appends the output channels of `other`, which must share `cin`, `s` and padding.
    pub fn stack_outputs(&self, other: &ConvKernel) -> Result<Self> {
        if (self.cin, self.s, self.padding) != (other.cin, other.s, other.padding) {
            return Err(Error::InvalidKernel("kernels differ in cin, size or padding".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::new(self.cout + other.cout, self.cin, self.s, self.padding, data)
    }

    /// Offset `s - p - 1` mapping polynomial index `h` to kernel tap `a = offset + h`.
    pub(crate) fn tap_offset(&self) -> i64 {
        self.s as i64 - self.padding as i64 - 1
    }
}

/// `f_ij[h1, h2] = K[i, j, s-p-1+h1, s-p-1+h2]` where that tap exists, zero
/// otherwise. Indexed `[out][in]`.
pub fn kernel_to_polys(k: &ConvKernel) -> Vec<Vec<TrigPoly2D>> {
    let d = k.degree();
    let off = k.tap_offset();
    let s = k.size() as i64;
    (0..k.cout())
        .map(|i| {
            (0..k.cin())
                .map(|j| {
                    TrigPoly2D::from_fn(d, |h1, h2| {
                        let (a, b) = (off + h1, off + h2);
                        if (0..s).contains(&a) && (0..s).contains(&b) {
                            k.at(i, j, a as usize, b as usize)
                        } else {
                            0.0
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Inverse of [`kernel_to_polys`] on in-band taps; taps no coefficient maps to are zero.
pub fn polys_to_kernel(polys: &[Vec<TrigPoly2D>], s: usize, padding: usize) -> Result<ConvKernel> {
    let cout = polys.len();
    let cin = polys.first().map_or(0, |r| r.len());
    if polys.iter().any(|r| r.len() != cin) {
        return Err(Error::InvalidKernel("ragged polynomial grid".into()));
    }
    let off = s as i64 - padding as i64 - 1;
    ConvKernel::from_fn(cout, cin, s, padding, |i, j, a, b| {
        polys[i][j].coeff(a as i64 - off, b as i64 - off)
    })
}
