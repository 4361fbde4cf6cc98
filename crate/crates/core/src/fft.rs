//! Discrete Fourier transforms.
//!
//! Forward: `X_k = sum_j x_j exp(-2 pi i jk / n)`, unnormalized.
//! Inverse: `x_j = (1/n) sum_k X_k exp(+2 pi i jk / n)`.
//! Any length is accepted (rustfft picks mixed-radix or Bluestein plans).

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn fft_in_place(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

pub fn ifft_in_place(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
    let scale = 1.0 / buf.len() as f64;
    for z in buf.iter_mut() {
        *z *= scale;
    }
}

pub fn fft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    fft_in_place(&mut buf);
    buf
}

pub fn ifft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    ifft_in_place(&mut buf);
    buf
}

/// Forward 2-D transform of a row-major `rows x cols` grid.
pub fn fft2(grid: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    assert_eq!(grid.len(), rows * cols);
    let mut buf = grid.to_vec();
    for r in buf.chunks_mut(cols) {
        fft_in_place(r);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = buf[r * cols + c];
        }
        fft_in_place(&mut column);
        for r in 0..rows {
            buf[r * cols + c] = column[r];
        }
    }
    buf
}
