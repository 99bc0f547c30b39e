#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

use fhartree::spectral::{kernel_samples, GridSpec, KernelCorrection, SpectralField};

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, 24)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `J₀(x) = π^{-1} ∫₀^π cos(x sin θ) dθ`, trapezoid on the periodic integrand.
pub fn bessel_j0(x: f64) -> f64 {
    let m = 64 + 2 * x.abs().ceil() as usize;
    let h = PI / m as f64;
    (0..m).map(|j| (x * (j as f64 * h).sin()).cos()).sum::<f64>() / m as f64
}

/// Transform of `exp(-r²/w²)` in 2D: `π w² exp(-w²k²/4)`.
pub fn gaussian_hat(w: f64, k: f64) -> f64 {
    PI * w * w * (-w * w * k * k / 4.0).exp()
}

/// `(−Δ)^α exp(-r²/w²)` at radius `r`, by the Hankel integral.
pub fn gaussian_frac_lap(w: f64, alpha: f64, r: f64) -> f64 {
    let k_max = 2.0 * (60.0f64).sqrt() / w;
    let f = |k: f64| k.powf(2.0 * alpha) * gaussian_hat(w, k) * bessel_j0(k * r) * k;
    simpson(&f, 0.0, k_max, 1e-13) / (2.0 * PI)
}

/// `‖exp(-r²/w²)‖²_{Ḣ^α}` in 2D by radial quadrature in frequency.
pub fn gaussian_sobolev_sq(w: f64, alpha: f64) -> f64 {
    let k_max = (120.0f64).sqrt() / w;
    let f = |k: f64| k.powf(2.0 * alpha + 1.0) * gaussian_hat(w, k).powi(2);
    simpson(&f, 0.0, k_max, 1e-14) / (2.0 * PI)
}

/// `|x|^{-γ}` averaged over the square cell of side `h` at the origin.
pub fn cell_average(gamma: f64, h: f64) -> f64 {
    let f = |t: f64| (h / (2.0 * t.cos())).powf(2.0 - gamma) / (2.0 - gamma);
    8.0 * simpson(&f, 0.0, PI / 4.0, 1e-15) / (h * h)
}

/// `Σ_j K(x_i − x_j) ρ_j h²` as a quadruple loop over a 2D periodic grid.
pub fn direct_convolution(grid: &GridSpec, kernel: &[f64], density: &[f64]) -> Vec<f64> {
    let n = grid.n();
    let h2 = grid.cell_volume();
    let mut out = vec![0.0; n * n];
    for i0 in 0..n {
        for i1 in 0..n {
            let mut acc = 0.0;
            for j0 in 0..n {
                let d0 = (i0 + n - j0) % n;
                for j1 in 0..n {
                    let d1 = (i1 + n - j1) % n;
                    acc += kernel[d0 * n + d1] * density[j0 * n + j1];
                }
            }
            out[i0 * n + i1] = acc * h2;
        }
    }
    out
}

/// Kernel samples with the origin rebuilt from an independent cell average.
pub fn oracle_kernel(grid: &GridSpec, gamma: f64, correction: KernelCorrection) -> Vec<f64> {
    match correction {
        KernelCorrection::CellAverage => {
            let n = grid.n();
            let h = grid.spacing();
            let signed = |i: usize| if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
            (0..n * n)
                .map(|i| {
                    let (a, b) = (signed(i / n) * h, signed(i % n) * h);
                    let r2 = a * a + b * b;
                    if r2 == 0.0 {
                        cell_average(gamma, h)
                    } else {
                        r2.powf(-gamma / 2.0)
                    }
                })
                .collect()
        }
        KernelCorrection::LatticeCorrected => kernel_samples(grid, gamma, correction).unwrap(),
    }
}

pub fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

/// A smooth, localized complex test field with a phase gradient.
pub fn lumpy_field(grid: &GridSpec) -> SpectralField {
    SpectralField::from_fn(grid, |x| {
        let a = (-((x[0] - 0.7).powi(2) + x[1].powi(2)) / 1.5).exp();
        let b = 0.6 * (-((x[0] + 0.4).powi(2) + (x[1] - 0.9).powi(2))).exp();
        Complex64::from_polar(a + b, 0.5 * x[0] - 0.3 * x[1])
    })
}
