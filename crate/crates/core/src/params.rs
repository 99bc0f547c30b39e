//! Physical parameters `(N, s, gamma)` and the exponents derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension, Lévy index and Hartree exponent.
///
/// The critical quantities `s_c`, `p_c` and `q_c` are always recomputed from
/// the three stored numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    dim: usize,
    s: f64,
    gamma: f64,
}

impl PhysParams {
    /// Validates `N ∈ {2, 3}`, `0 < s < 1` and the intercritical window
    /// `2s < gamma < min(N, 4s)`.
    pub fn new(dim: usize, s: f64, gamma: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidParams(format!("dimension {dim} not in {{2, 3}}")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParams(format!("s = {s} outside (0, 1)")));
        }
        let upper = (dim as f64).min(4.0 * s);
        if !(gamma > 2.0 * s && gamma < upper) {
            return Err(Error::InvalidParams(format!(
                "gamma = {gamma} outside the window ({}, {upper})",
                2.0 * s
            )));
        }
        Ok(Self { dim, s, gamma })
    }

    /// `N = 2`, `s = 0.7`, `gamma = 1.6`.
    pub fn canonical() -> Self {
        Self { dim: 2, s: 0.7, gamma: 1.6 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Critical Sobolev index `(gamma - 2s) / 2`.
    pub fn s_c(&self) -> f64 {
        (self.gamma - 2.0 * self.s) / 2.0
    }

    /// Critical Lebesgue exponent `2N / (N - gamma + 2s)`.
    pub fn p_c(&self) -> f64 {
        let n = self.dim as f64;
        2.0 * n / (n - self.gamma + 2.0 * self.s)
    }

    /// Strichartz exponent `q_c = r_c = (2N + 4s) / (N + 2s - gamma)`.
    pub fn q_c(&self) -> f64 {
        let n = self.dim as f64;
        (2.0 * n + 4.0 * self.s) / (n + 2.0 * self.s - self.gamma)
    }

    /// Power `(s - s_c) / s_c` carried by the mass in the scale-invariant products.
    pub fn mass_exponent(&self) -> f64 {
        (self.s - self.s_c()) / self.s_c()
    }

    /// Amplitude exponent `(N - gamma + 2s) / 2` of the scaling symmetry.
    pub fn scaling_exponent(&self) -> f64 {
        (self.dim as f64 - self.gamma + 2.0 * self.s) / 2.0
    }

    /// `s >= N / (2N - 1)`, required before a scattering prediction is made.
    pub fn scattering_hypothesis_holds(&self) -> bool {
        let n = self.dim as f64;
        self.s >= n / (2.0 * n - 1.0)
    }
}
