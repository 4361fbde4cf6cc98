//! Direct multi-channel 2-D convolutions on `n x n` images.
//!
//! Images are flat `(channel, row, col)` arrays. The zero-padded operator is
//!
//! ```text
//! y_i[v] = sum_j sum_{a,b} K[i,j,a,b] x_j[v1 + s-1-p - a, v2 + s-1-p - b]
//! ```
//!
//! with the output kept at `n x n`. Taps farther than `s / 2` from `s-1-p` have
//! no generating-polynomial coefficient and are skipped, which only matters
//! when `p != s / 2`. With that convention the forward map is exactly
//! `M^T` for the matrix from [`super::build_conv_matrix`].

use super::kernel::ConvKernel;
use crate::dense::check_len;
use crate::error::Result;

fn band_taps(k: &ConvKernel) -> Vec<(usize, i64)> {
    let off = k.tap_offset();
    let d = k.degree() as i64;
    (0..k.size())
        .filter(|&a| (a as i64 - off).abs() <= d)
        .map(|a| (a, off - a as i64))
        .collect()
}

/// Zero-padded forward convolution, `cin` images in, `cout` images out.
pub fn conv2d(k: &ConvKernel, x: &[f64], n: usize) -> Result<Vec<f64>> {
    check_len(k.cin() * n * n, x.len())?;
    let taps = band_taps(k);
    let nn = n as i64;
    let mut y = vec![0.0; k.cout() * n * n];
    for i in 0..k.cout() {
        let out = &mut y[i * n * n..(i + 1) * n * n];
        for j in 0..k.cin() {
            let img = &x[j * n * n..(j + 1) * n * n];
            for &(a, da) in &taps {
                for &(b, db) in &taps {
                    let w = k.at(i, j, a, b);
                    if w == 0.0 {
                        continue;
                    }
                    let r0 = (-da).max(0);
                    let r1 = (nn - da).min(nn);
                    let c0 = (-db).max(0);
                    let c1 = (nn - db).min(nn);
                    for v1 in r0..r1 {
                        let src = &img[((v1 + da) * nn) as usize..];
                        let dst = &mut out[(v1 * nn) as usize..];
                        for v2 in c0..c1 {
                            dst[v2 as usize] += w * src[(v2 + db) as usize];
                        }
                    }
                }
            }
        }
    }
    Ok(y)
}

/// Adjoint of [`conv2d`]: `cout` images in, `cin` images out.
pub fn conv2d_transpose(k: &ConvKernel, y: &[f64], n: usize) -> Result<Vec<f64>> {
    check_len(k.cout() * n * n, y.len())?;
    let taps = band_taps(k);
    let nn = n as i64;
    let mut x = vec![0.0; k.cin() * n * n];
    for j in 0..k.cin() {
        let out = &mut x[j * n * n..(j + 1) * n * n];
        for i in 0..k.cout() {
            let img = &y[i * n * n..(i + 1) * n * n];
            for &(a, da) in &taps {
                for &(b, db) in &taps {
                    let w = k.at(i, j, a, b);
                    if w == 0.0 {
                        continue;
                    }
                    // x[w] += K y[w - d]
                    let r0 = da.max(0);
                    let r1 = (nn + da).min(nn);
                    let c0 = db.max(0);
                    let c1 = (nn + db).min(nn);
                    for w1 in r0..r1 {
                        let src = &img[((w1 - da) * nn) as usize..];
                        let dst = &mut out[(w1 * nn) as usize..];
                        for w2 in c0..c1 {
                            dst[w2 as usize] += w * src[(w2 - db) as usize];
                        }
                    }
                }
            }
        }
    }
    Ok(x)
}

/// Wrap-around convolution `y_i[u] = sum_j sum_{a,b} K[i,j,a,b] x_j[(u - (a,b)) mod n]`,
/// the operator that a 2-D DFT block-diagonalizes.
pub fn circular_conv2d(k: &ConvKernel, x: &[f64], n: usize) -> Result<Vec<f64>> {
    check_len(k.cin() * n * n, x.len())?;
    let s = k.size();
    let mut y = vec![0.0; k.cout() * n * n];
    for i in 0..k.cout() {
        for j in 0..k.cin() {
            let img = &x[j * n * n..(j + 1) * n * n];
            for a in 0..s {
                for b in 0..s {
                    let w = k.at(i, j, a, b);
                    if w == 0.0 {
                        continue;
                    }
                    for u1 in 0..n {
                        let r = (u1 + n * s - a) % n;
                        for u2 in 0..n {
                            let c = (u2 + n * s - b) % n;
                            y[(i * n + u1) * n + u2] += w * img[r * n + c];
                        }
                    }
                }
            }
        }
    }
    Ok(y)
}
