use num_complex::Complex64;

use super::fft;
use super::field::{parseval_weight, SpectralField, Space};
use super::multipliers::{frac_symbol, MultiplierSet};
use crate::error::{Error, Result};

/// Applies a real symbol to a physical field: `F^{-1}[m F u]`.
pub(crate) fn apply_real_symbol(u: &[Complex64], dim: usize, n: usize, symbol: &[f64]) -> Vec<Complex64> {
    let mut buf = u.to_vec();
    fft::forward(&mut buf, dim, n);
    for (z, m) in buf.iter_mut().zip(symbol) {
        *z *= *m;
    }
    fft::inverse_normalized(&mut buf, dim, n);
    buf
}

/// Applies the purely imaginary symbol `i m` to a physical field.
pub(crate) fn apply_imag_symbol(u: &[Complex64], dim: usize, n: usize, symbol: &[f64]) -> Vec<Complex64> {
    let mut buf = u.to_vec();
    fft::forward(&mut buf, dim, n);
    for (z, m) in buf.iter_mut().zip(symbol) {
        *z *= Complex64::new(0.0, *m);
    }
    fft::inverse_normalized(&mut buf, dim, n);
    buf
}

/// `(−Δ)^α u = F^{-1}[|ξ|^{2α} F u]` for `0 ≤ α ≤ 2`.
pub fn fractional_laplacian(u: &SpectralField, alpha: f64) -> Result<SpectralField> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("order {alpha} outside [0, 2]")));
    }
    u.require_physical("fractional_laplacian")?;
    let g = u.grid();
    let symbol = frac_symbol(&g.k2_table(), alpha);
    let values = apply_real_symbol(u.values(), g.dim(), g.n(), &symbol);
    SpectralField::from_values(g, values, Space::Physical)
}

/// Free flow `U(t)u = F^{-1}[e^{-it|ξ|^{2s}} F u]`.
pub fn linear_propagator(u: &SpectralField, mult: &MultiplierSet, t: f64) -> Result<SpectralField> {
    u.require_physical("linear_propagator")?;
    u.require_same_grid(mult.grid(), "linear_propagator")?;
    let g = u.grid();
    let mut buf = u.values().to_vec();
    fft::forward(&mut buf, g.dim(), g.n());
    for (z, w) in buf.iter_mut().zip(mult.frac_lap_s()) {
        *z *= Complex64::from_polar(1.0, -t * w);
    }
    fft::inverse_normalized(&mut buf, g.dim(), g.n());
    SpectralField::from_values(g, buf, Space::Physical)
}

/// `W ∗ |u|²` sampled on the grid, as a real vector.
pub(crate) fn hartree_potential_values(density: &[f64], mult: &MultiplierSet) -> Vec<f64> {
    let g = mult.grid();
    let mut buf: Vec<Complex64> = density.iter().map(|&d| Complex64::new(d, 0.0)).collect();
    fft::forward(&mut buf, g.dim(), g.n());
    for (z, w) in buf.iter_mut().zip(mult.hartree_kernel_hat()) {
        *z *= *w;
    }
    fft::inverse_normalized(&mut buf, g.dim(), g.n());
    buf.into_iter().map(|z| z.re).collect()
}

/// The Hartree factor `W ∗ |u|²` as a real-valued physical field.
pub fn hartree_potential(u: &SpectralField, mult: &MultiplierSet) -> Result<SpectralField> {
    u.require_physical("hartree_potential")?;
    u.require_same_grid(mult.grid(), "hartree_potential")?;
    let pot = hartree_potential_values(&u.density(), mult);
    SpectralField::from_values(u.grid(), pot.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), Space::Physical)
}

/// `(Σ_ξ |ξ|^{2α} |û|² · w)^{1/2}` with `w` from [`parseval_weight`].
pub fn sobolev_norm(u: &SpectralField, alpha: f64) -> f64 {
    sobolev_norm_sq(u, alpha).sqrt()
}

pub(crate) fn sobolev_norm_sq(u: &SpectralField, alpha: f64) -> f64 {
    let g = u.grid();
    let uh = u.to_fourier();
    let k2 = g.k2_table();
    let symbol = frac_symbol(&k2, alpha);
    let sum: f64 = uh.values().iter().zip(&symbol).map(|(z, m)| m * z.norm_sqr()).sum();
    sum * parseval_weight(g)
}

/// Discrete `(h^N Σ |u|^p)^{1/p}`; `p = ∞` gives the max modulus.
pub fn lp_norm(u: &SpectralField, p: f64) -> f64 {
    if p.is_infinite() {
        return u.max_modulus();
    }
    let h_n = u.grid().cell_volume();
    (u.values().iter().map(|z| z.norm().powf(p)).sum::<f64>() * h_n).powf(1.0 / p)
}

/// `∂_axis u` by spectral differentiation.
pub fn gradient_component(u: &SpectralField, axis: usize) -> Result<SpectralField> {
    u.require_physical("gradient_component")?;
    let g = u.grid();
    let values = apply_imag_symbol(u.values(), g.dim(), g.n(), &g.wavevector_component(axis));
    SpectralField::from_values(g, values, Space::Physical)
}
