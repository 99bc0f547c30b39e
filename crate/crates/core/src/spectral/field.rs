use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft;
use super::grid::GridSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    Physical,
    Fourier,
}

/// Complex amplitude on a periodic grid, either as point values or as
/// transform coefficients.
///
/// Transform convention: `û(ξ) = h^N Σ_x e^{-iξ·x} u(x)` with `x` measured from
/// the box center, and `u(x) = L^{-N} Σ_ξ e^{iξ·x} û(ξ)`. This is the discrete
/// analogue of `û(ξ) = ∫ e^{-ix·ξ} u dx`, `u = (2π)^{-N} ∫ e^{ix·ξ} û dξ`.
/// Fourier coefficients are stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    values: Vec<Complex64>,
    space: Space,
}

/// Weight turning `Σ_ξ |û(ξ)|²` into `‖u‖₂²`: `(2π)^{-N} (2π/L)^N = L^{-N}`.
///
/// Every Fourier-side quadrature in the crate goes through this function.
pub fn parseval_weight(grid: &GridSpec) -> f64 {
    let dk = 2.0 * std::f64::consts::PI / grid.len();
    (dk / (2.0 * std::f64::consts::PI)).powi(grid.dim() as i32)
}

impl SpectralField {
    pub fn zeros(grid: &GridSpec) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.total_points()],
            grid: grid.clone(),
            space: Space::Physical,
        }
    }

    pub fn from_values(grid: &GridSpec, values: Vec<Complex64>, space: Space) -> Result<Self> {
        if values.len() != grid.total_points() {
            return Err(Error::Mismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.total_points()
            )));
        }
        Ok(Self { grid: grid.clone(), values, space })
    }

    /// Samples `f(x)` at every grid point. `x` has `N` meaningful components.
    pub fn from_fn(grid: &GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let dim = grid.dim();
        let values = (0..grid.total_points())
            .map(|i| {
                let x = grid.position(i);
                f(&x[..dim])
            })
            .collect();
        Self { grid: grid.clone(), values, space: Space::Physical }
    }

    /// Real radial profile `f(|x|)`.
    pub fn radial(grid: &GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            Complex64::new(f(r), 0.0)
        })
    }

    /// `amplitude * exp(-|x|² / width²)`.
    pub fn gaussian(grid: &GridSpec, amplitude: f64, width: f64) -> Self {
        Self::radial(grid, |r| amplitude * (-(r * r) / (width * width)).exp())
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn require_physical(&self, what: &str) -> Result<()> {
        if self.space != Space::Physical {
            return Err(Error::Mismatch(format!("{what} expects a physical-space field")));
        }
        Ok(())
    }

    pub(crate) fn require_same_grid(&self, grid: &GridSpec, what: &str) -> Result<()> {
        if &self.grid != grid {
            return Err(Error::Mismatch(format!("{what}: field grid differs from operator grid")));
        }
        Ok(())
    }

    /// Transform coefficients under the crate convention.
    pub fn to_fourier(&self) -> SpectralField {
        match self.space {
            Space::Fourier => self.clone(),
            Space::Physical => {
                let mut values = self.values.clone();
                fft::forward(&mut values, self.grid.dim(), self.grid.n());
                let h_n = self.grid.cell_volume();
                for (i, z) in values.iter_mut().enumerate() {
                    *z *= h_n * self.grid.centering_sign(i);
                }
                SpectralField { grid: self.grid.clone(), values, space: Space::Fourier }
            }
        }
    }

    pub fn to_physical(&self) -> SpectralField {
        match self.space {
            Space::Physical => self.clone(),
            Space::Fourier => {
                let mut values = self.values.clone();
                let inv_vol = 1.0 / self.grid.volume();
                for (i, z) in values.iter_mut().enumerate() {
                    *z *= inv_vol * self.grid.centering_sign(i);
                }
                fft::inverse(&mut values, self.grid.dim(), self.grid.n());
                SpectralField { grid: self.grid.clone(), values, space: Space::Physical }
            }
        }
    }

    /// Pointwise `|u|²` (physical space).
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn scaled(&self, c: Complex64) -> SpectralField {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|z| *z *= c);
        out
    }

    pub fn scaled_real(&self, c: f64) -> SpectralField {
        self.scaled(Complex64::new(c, 0.0))
    }

    pub fn conj(&self) -> SpectralField {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    /// Cyclic shift by whole grid cells along each axis.
    pub fn shifted(&self, shift: &[isize]) -> SpectralField {
        let n = self.grid.n() as isize;
        let dim = self.grid.dim();
        let mut out = self.clone();
        for (i, z) in out.values.iter_mut().enumerate() {
            let idx = self.grid.unflatten(i);
            let mut src = 0usize;
            for axis in 0..dim {
                let s = shift.get(axis).copied().unwrap_or(0);
                let j = (idx[axis] as isize - s).rem_euclid(n) as usize;
                src = src * self.grid.n() + j;
            }
            *z = self.values[src];
        }
        out
    }

    /// `h^N Σ conj(u) v` for physical fields.
    pub fn inner(&self, other: &SpectralField) -> Complex64 {
        let h_n = self.grid.cell_volume();
        self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * h_n
    }

    /// Discrete `‖u - v‖₂` for physical fields.
    pub fn distance(&self, other: &SpectralField) -> f64 {
        let h_n = self.grid.cell_volume();
        (self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * h_n).sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn centered_gaussian_transform_is_real_positive() {
        let g = make_grid(2, 64, 16.0).unwrap();
        let u = SpectralField::gaussian(&g, 1.0, 1.0);
        let uh = u.to_fourier();
        // continuum transform of exp(-|x|^2) is π exp(-|ξ|^2/4)
        for (i, z) in uh.values().iter().enumerate() {
            let k = g.wavevector(i);
            let exact = std::f64::consts::PI * (-(k[0] * k[0] + k[1] * k[1]) / 4.0).exp();
            assert!((z - exact).norm() < 1e-12, "mode {i}: {z} vs {exact}");
        }
    }

    #[test]
    fn parseval_weight_is_inverse_volume() {
        let g = make_grid(3, 16, 5.0).unwrap();
        assert!((parseval_weight(&g) - 1.0 / 125.0).abs() < 1e-15);
    }

    #[test]
    fn shift_moves_peak() {
        let g = make_grid(2, 16, 16.0).unwrap();
        let u = SpectralField::gaussian(&g, 1.0, 1.0);
        let v = u.shifted(&[2, -3]);
        let peak = v.values().iter().enumerate().max_by(|a, b| a.1.re.total_cmp(&b.1.re)).unwrap().0;
        assert_eq!(g.unflatten(peak)[..2], [10, 5]);
    }
}
