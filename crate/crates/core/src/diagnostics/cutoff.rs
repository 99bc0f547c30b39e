use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::GridSpec;

/// `ψ(r)` with `ψ = r²` on `[0, 1]`, zero beyond 2, and a degree-9 bridge
/// on `[1, 2]` matching derivatives through order four at both ends.
///
/// Returns `ψ, ψ', ψ'', ψ''', ψ''''`.
pub fn psi_derivatives(r: f64) -> [f64; 5] {
    if r <= 1.0 {
        return [r * r, 2.0 * r, 2.0, 0.0, 0.0];
    }
    if r >= 2.0 {
        return [0.0; 5];
    }
    const C: [f64; 10] = [1.0, 2.0, 1.0, 0.0, 0.0, -301.0, 973.0, -1226.0, 705.0, -155.0];
    let t = r - 1.0;
    let mut out = [0.0; 5];
    for (d, slot) in out.iter_mut().enumerate() {
        *slot = (d..C.len())
            .map(|k| {
                let falling: f64 = (0..d).map(|j| (k - j) as f64).product();
                C[k] * falling * t.powi((k - d) as i32)
            })
            .sum();
    }
    out
}

/// Radial cutoff `φ(x) = ψ(|x|)` rescaled to radius `R`, tabulated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffPhi {
    radius: f64,
    grid: GridSpec,
    /// `R ∇φ(x/R)` per axis.
    grad: Vec<Vec<f64>>,
    /// `(∂_k ∂_l φ)(x/R)`, row-major `N × N` per point.
    hessian: Vec<f64>,
    /// `(Δ²φ)(x/R)`.
    bilap: Vec<f64>,
}

impl CutoffPhi {
    pub fn new(grid: &GridSpec, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!("cutoff radius {radius} must be positive")));
        }
        if 2.0 * radius > grid.len() / 2.0 * (1.0 + 1e-12) {
            log::warn!("cutoff support 2R = {} leaves the box half-width {}", 2.0 * radius, grid.len() / 2.0);
        }
        let dim = grid.dim();
        let nd = dim as f64;
        let total = grid.total_points();
        let mut grad = vec![vec![0.0; total]; dim];
        let mut hessian = vec![0.0; total * dim * dim];
        let mut bilap = vec![0.0; total];
        for i in 0..total {
            let x = grid.position(i);
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let rho = r / radius;
            let [_, d1, d2, d3, d4] = psi_derivatives(rho);
            if rho < 1.0 {
                for (axis, g) in grad.iter_mut().enumerate() {
                    g[i] = 2.0 * x[axis];
                }
                for k in 0..dim {
                    hessian[i * dim * dim + k * dim + k] = 2.0;
                }
                continue;
            }
            let unit: Vec<f64> = (0..dim).map(|a| x[a] / r).collect();
            for (axis, g) in grad.iter_mut().enumerate() {
                g[i] = radius * d1 * unit[axis];
            }
            for k in 0..dim {
                for l in 0..dim {
                    let delta = if k == l { 1.0 } else { 0.0 };
                    hessian[i * dim * dim + k * dim + l] = d2 * unit[k] * unit[l] + d1 / rho * (delta - unit[k] * unit[l]);
                }
            }
            // Δψ = g = ψ'' + (N−1)ψ'/ρ, Δ²ψ = g'' + (N−1)g'/ρ
            let m = nd - 1.0;
            let g1 = d3 + m * (d2 / rho - d1 / (rho * rho));
            let g2 = d4 + m * (d3 / rho - 2.0 * d2 / (rho * rho) + 2.0 * d1 / (rho * rho * rho));
            bilap[i] = g2 + m * g1 / rho;
        }
        Ok(Self { radius, grid: grid.clone(), grad, hessian, bilap })
    }

    /// Default radius `L/4`.
    pub fn default_for(grid: &GridSpec) -> Result<Self> {
        Self::new(grid, grid.len() / 4.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `R ∇φ(x/R)` along one axis.
    pub fn grad(&self, axis: usize) -> &[f64] {
        &self.grad[axis]
    }

    pub fn hessian(&self, point: usize, k: usize, l: usize) -> f64 {
        let d = self.grid.dim();
        self.hessian[point * d * d + k * d + l]
    }

    /// `(Δ²φ)(x/R)`; the `R^{-2}` factor is applied by the caller.
    pub fn bilap(&self) -> &[f64] {
        &self.bilap
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn bridge_matches_at_both_ends() {
        let inner = [1.0, 2.0, 2.0, 0.0, 0.0];
        let just_in = psi_derivatives(1.0 + 1e-12);
        for (a, b) in just_in.iter().zip(inner) {
            assert!((a - b).abs() < 1e-6);
        }
        let just_out = psi_derivatives(2.0 - 1e-12);
        assert!(just_out.iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn bilaplacian_matches_finite_differences() {
        // radial Δ² in 2D from the profile ψ by nested differences of g = ψ'' + ψ'/r
        let lap = |r: f64| {
            let [_, d1, d2, _, _] = psi_derivatives(r);
            d2 + d1 / r
        };
        let grid = make_grid(2, 16, 8.0).unwrap();
        let phi = CutoffPhi::new(&grid, 1.0).unwrap();
        for (i, b) in phi.bilap().iter().enumerate() {
            let x = grid.position(i);
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r <= 1.05 || r >= 1.95 {
                continue;
            }
            let h = 1e-4;
            let g1 = (lap(r + h) - lap(r - h)) / (2.0 * h);
            let g2 = (lap(r + h) - 2.0 * lap(r) + lap(r - h)) / (h * h);
            assert!((b - (g2 + g1 / r)).abs() < 1e-3 * (1.0 + b.abs()), "r = {r}");
        }
    }

    #[test]
    fn exact_quadratic_inside() {
        let grid = make_grid(3, 16, 8.0).unwrap();
        let phi = CutoffPhi::new(&grid, 1.5).unwrap();
        for i in 0..grid.total_points() {
            let x = grid.position(i);
            if x.iter().map(|c| c * c).sum::<f64>().sqrt() < 1.5 {
                assert_eq!(phi.grad(0)[i], 2.0 * x[0]);
                assert_eq!(phi.hessian(i, 1, 1), 2.0);
                assert_eq!(phi.bilap()[i], 0.0);
            }
        }
    }
}
