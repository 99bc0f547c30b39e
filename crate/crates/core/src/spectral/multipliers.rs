use super::grid::GridSpec;
use super::kernel::{build_hartree_kernel_with, KernelCorrection};
use crate::error::Result;
use crate::params::PhysParams;

/// Fourier-side tables shared by every operator on one grid.
#[derive(Debug, Clone)]
pub struct MultiplierSet {
    grid: GridSpec,
    params: PhysParams,
    correction: KernelCorrection,
    k2: Vec<f64>,
    frac_lap_s: Vec<f64>,
    hartree_kernel_hat: Vec<f64>,
}

impl MultiplierSet {
    pub fn new(grid: &GridSpec, params: &PhysParams) -> Result<Self> {
        Self::with_correction(grid, params, KernelCorrection::default())
    }

    pub fn with_correction(grid: &GridSpec, params: &PhysParams, correction: KernelCorrection) -> Result<Self> {
        if grid.dim() != params.dim() {
            return Err(crate::error::Error::Mismatch(format!(
                "grid is {}-dimensional but parameters are {}-dimensional",
                grid.dim(),
                params.dim()
            )));
        }
        let k2 = grid.k2_table();
        let frac_lap_s = k2.iter().map(|k| k.powf(params.s())).collect();
        let hartree_kernel_hat = build_hartree_kernel_with(grid, params.gamma(), correction)?;
        Ok(Self { grid: grid.clone(), params: *params, correction, k2, frac_lap_s, hartree_kernel_hat })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn correction(&self) -> KernelCorrection {
        self.correction
    }

    /// `|ξ|²` per mode.
    pub fn k2(&self) -> &[f64] {
        &self.k2
    }

    /// `|ξ|^{2s}` per mode.
    pub fn frac_lap_s(&self) -> &[f64] {
        &self.frac_lap_s
    }

    /// `|ξ|^{2α}` per mode, built on demand.
    pub fn frac_lap_alpha(&self, alpha: f64) -> Vec<f64> {
        frac_symbol(&self.k2, alpha)
    }

    /// `Ŵ(ξ)` per mode.
    pub fn hartree_kernel_hat(&self) -> &[f64] {
        &self.hartree_kernel_hat
    }

    /// Imaginary part `ξ_axis Ŵ(ξ)` of the purely imaginary symbol of `∇W`.
    pub fn grad_kernel_hat(&self, axis: usize) -> Vec<f64> {
        self.grid
            .wavevector_component(axis)
            .iter()
            .zip(&self.hartree_kernel_hat)
            .map(|(k, w)| k * w)
            .collect()
    }

    pub fn kernel_at_zero(&self) -> f64 {
        self.hartree_kernel_hat[0]
    }
}

pub(crate) fn frac_symbol(k2: &[f64], alpha: f64) -> Vec<f64> {
    k2.iter()
        .map(|&k| if k == 0.0 { if alpha == 0.0 { 1.0 } else { 0.0 } } else { k.powf(alpha) })
        .collect()
}
