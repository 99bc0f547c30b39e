//! Periodic grids, the transform convention and Fourier multipliers.

pub mod fft;
mod field;
mod grid;
mod kernel;
mod multipliers;
mod ops;
pub mod zeta;

pub use field::{parseval_weight, SpectralField, Space};
pub use grid::{make_grid, GridSpec};
pub use kernel::{
    build_hartree_kernel, build_hartree_kernel_with, kernel_samples, stencil_weights, unit_cell_average,
    KernelCorrection,
};
pub use multipliers::MultiplierSet;
pub use ops::{fractional_laplacian, gradient_component, hartree_potential, linear_propagator, lp_norm, sobolev_norm};
pub(crate) use ops::{hartree_potential_values, sobolev_norm_sq};
