//! Unnormalized multi-dimensional DFTs on row-major cubes.
//!
//! Plans are cached per thread. Every axis pass runs in a fixed order, so
//! results are bitwise reproducible for a given build.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static SCRATCH: RefCell<(Vec<Complex64>, Vec<Complex64>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction))
}

/// In-place `exp(-2πi jk/n)` transform along every axis.
pub fn forward(data: &mut [Complex64], dim: usize, n: usize) {
    transform(data, dim, n, FftDirection::Forward);
}

/// In-place `exp(+2πi jk/n)` transform along every axis, without the `1/n^N`.
pub fn inverse(data: &mut [Complex64], dim: usize, n: usize) {
    transform(data, dim, n, FftDirection::Inverse);
}

/// Inverse transform including the `1/n^N` normalization.
pub fn inverse_normalized(data: &mut [Complex64], dim: usize, n: usize) {
    inverse(data, dim, n);
    let scale = 1.0 / (n.pow(dim as u32) as f64);
    data.iter_mut().for_each(|z| *z *= scale);
}

fn transform(data: &mut [Complex64], dim: usize, n: usize, direction: FftDirection) {
    let total = n.pow(dim as u32);
    assert_eq!(data.len(), total, "buffer does not match an n^N cube");
    let fft = plan(n, direction);
    SCRATCH.with(|cell| {
        let (lines, scratch) = &mut *cell.borrow_mut();
        let scratch_len = fft.get_inplace_scratch_len();
        if scratch.len() < scratch_len {
            scratch.resize(scratch_len, Complex64::new(0.0, 0.0));
        }
        // contiguous last axis: all lines at once
        fft.process_with_scratch(data, &mut scratch[..scratch_len]);
        if dim == 1 {
            return;
        }
        if lines.len() < total {
            lines.resize(total, Complex64::new(0.0, 0.0));
        }
        for axis in (0..dim - 1).rev() {
            let stride = n.pow((dim - 1 - axis) as u32);
            let outer = total / (n * stride);
            // gather lines along `axis` into contiguous rows
            for o in 0..outer {
                let base = o * n * stride;
                for k in 0..n {
                    let src = &data[base + k * stride..base + (k + 1) * stride];
                    for (inner, &z) in src.iter().enumerate() {
                        lines[(o * stride + inner) * n + k] = z;
                    }
                }
            }
            fft.process_with_scratch(&mut lines[..total], &mut scratch[..scratch_len]);
            for o in 0..outer {
                let base = o * n * stride;
                for k in 0..n {
                    let dst = &mut data[base + k * stride..base + (k + 1) * stride];
                    for (inner, z) in dst.iter_mut().enumerate() {
                        *z = lines[(o * stride + inner) * n + k];
                    }
                }
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_2d(data: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for k0 in 0..n {
            for k1 in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j0 in 0..n {
                    for j1 in 0..n {
                        let phase = -2.0 * std::f64::consts::PI * ((j0 * k0 + j1 * k1) as f64) / n as f64;
                        acc += data[j0 * n + j1] * Complex64::from_polar(1.0, phase);
                    }
                }
                out[k0 * n + k1] = acc;
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 8;
        let data: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        forward(&mut fast, 2, n);
        let slow = naive_2d(&data, n);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn three_dim_roundtrip() {
        let n = 16;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.013).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let mut work = data.clone();
        forward(&mut work, 3, n);
        inverse_normalized(&mut work, 3, n);
        for (a, b) in work.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
