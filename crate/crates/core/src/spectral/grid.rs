use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid centered on the origin: `n` points per axis on
/// `[-L/2, L/2)` in `N` dimensions, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    len: f64,
    coords: Vec<f64>,
    wavenumbers: Vec<f64>,
}

/// Builds the grid descriptor. `n` must be a power of two with `n >= 16`.
pub fn make_grid(dim: usize, n: usize, len: f64) -> Result<GridSpec> {
    if dim != 2 && dim != 3 {
        return Err(Error::InvalidGrid(format!("dimension {dim} not in {{2, 3}}")));
    }
    if !n.is_power_of_two() || n < 16 {
        return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= 16")));
    }
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::InvalidGrid(format!("box length {len} must be positive")));
    }
    let h = len / n as f64;
    let coords = (0..n).map(|j| (j as f64 - (n / 2) as f64) * h).collect();
    let dk = 2.0 * std::f64::consts::PI / len;
    let wavenumbers = (0..n)
        .map(|k| {
            let k = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            k * dk
        })
        .collect();
    Ok(GridSpec { dim, n, len, coords, wavenumbers })
}

impl GridSpec {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Box side length.
    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn spacing(&self) -> f64 {
        self.len / self.n as f64
    }

    /// `h^N`, the quadrature weight of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.len.powi(self.dim as i32)
    }

    pub fn total_points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Axis coordinates `x_j = (j - n/2) h`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Axis wavenumbers `2πk/L` in FFT order (`k = 0..n/2-1, -n/2..-1`).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Largest resolved wavenumber magnitude per axis, `π / h`.
    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI / self.spacing()
    }

    /// Splits a flat row-major index into per-axis indices.
    #[inline]
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    /// Physical position of a flat index (unused trailing components are zero).
    #[inline]
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = self.coords[idx[axis]];
        }
        x
    }

    /// Wavevector of a flat index in FFT order.
    #[inline]
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let idx = self.unflatten(flat);
        let mut k = [0.0; 3];
        for axis in 0..self.dim {
            k[axis] = self.wavenumbers[idx[axis]];
        }
        k
    }

    /// `|x|` at every grid point.
    pub fn radius_table(&self) -> Vec<f64> {
        (0..self.total_points())
            .map(|i| {
                let x = self.position(i);
                (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
            })
            .collect()
    }

    /// `|ξ|²` for every mode in FFT order.
    pub fn k2_table(&self) -> Vec<f64> {
        (0..self.total_points())
            .map(|i| {
                let k = self.wavevector(i);
                k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
            })
            .collect()
    }

    /// Component `ξ_axis` for every mode in FFT order.
    pub fn wavevector_component(&self, axis: usize) -> Vec<f64> {
        (0..self.total_points()).map(|i| self.wavevector(i)[axis]).collect()
    }

    /// Component `x_axis` for every grid point.
    pub fn position_component(&self, axis: usize) -> Vec<f64> {
        (0..self.total_points()).map(|i| self.position(i)[axis]).collect()
    }

    /// Parity `(-1)^(k_1 + ... + k_N)` of a mode, used to move the transform
    /// origin from the array corner to the box center.
    #[inline]
    pub(crate) fn centering_sign(&self, flat: usize) -> f64 {
        let idx = self.unflatten(flat);
        let parity: usize = idx[..self.dim].iter().sum();
        if parity % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Mode lies in the outer half of the spectrum along some axis (`|k| >= n/4`).
    pub(crate) fn is_tail_mode(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        idx[..self.dim].iter().any(|&k| {
            let signed = if k < self.n / 2 { k as isize } else { k as isize - self.n as isize };
            signed.unsigned_abs() >= self.n / 4
        })
    }

    /// Mode survives the 2/3 truncation rule along every axis.
    pub(crate) fn passes_two_thirds(&self, flat: usize) -> bool {
        let idx = self.unflatten(flat);
        idx[..self.dim].iter().all(|&k| {
            let signed = if k < self.n / 2 { k as isize } else { k as isize - self.n as isize };
            3 * signed.unsigned_abs() < self.n
        })
    }
}
