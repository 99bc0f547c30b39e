use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GroundState, IterationInfo};
use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::spectral::{fft, hartree_potential_values, GridSpec, MultiplierSet, SpectralField, Space};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Stop once the relative L² change between iterates drops below this.
    pub tol: f64,
    /// Width of the default Gaussian seed `exp(-|x|²/w²)`.
    pub seed_width: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iter: 1000, tol: 1e-12, seed_width: 1.0 }
    }
}

pub fn solve_ground_state(
    p: &PhysParams,
    grid: &GridSpec,
    seed: Option<&SpectralField>,
    opts: &SolverOptions,
) -> Result<GroundState> {
    let mult = MultiplierSet::new(grid, p)?;
    solve_ground_state_with(&mult, seed, opts)
}

/// Spectral renormalization `Q ← α L^{-1} N(Q)` with `L = 1 + |ξ|^{2s}`,
/// `N(Q) = (W ∗ Q²)Q` and `α = (⟨Q, LQ⟩ / ⟨Q, N(Q)⟩)^{3/2}`.
pub fn solve_ground_state_with(
    mult: &MultiplierSet,
    seed: Option<&SpectralField>,
    opts: &SolverOptions,
) -> Result<GroundState> {
    let grid = mult.grid();
    let (dim, n) = (grid.dim(), grid.n());
    let seed = match seed {
        Some(s) => {
            s.require_same_grid(grid, "ground-state seed")?;
            s.require_physical("ground-state seed")?;
            s.clone()
        }
        None => SpectralField::gaussian(grid, 1.0, opts.seed_width),
    };
    let peak = seed.max_modulus();
    if peak == 0.0 {
        return Err(Error::ZeroField("ground-state seed"));
    }
    if seed.values().iter().any(|z| z.re < -1e-12 * peak || z.im.abs() > 1e-12 * peak) {
        return Err(Error::InvalidArgument("ground-state seed must be real and nonnegative".into()));
    }
    let symbol: Vec<f64> = mult.frac_lap_s().iter().map(|w| 1.0 + w).collect();
    let h_n = grid.cell_volume();
    let mut q: Vec<f64> = seed.values().iter().map(|z| z.re).collect();
    let mut qh = vec![Complex64::new(0.0, 0.0); q.len()];
    let mut nh = vec![Complex64::new(0.0, 0.0); q.len()];
    let mut info = IterationInfo { iterations: 0, last_change: f64::INFINITY, last_alpha: f64::NAN, converged: false };
    let mut worst_imag = 0.0f64;

    for it in 1..=opts.max_iter {
        let rho: Vec<f64> = q.iter().map(|v| v * v).collect();
        let pot = hartree_potential_values(&rho, mult);
        for ((a, b), (&qi, &pi)) in qh.iter_mut().zip(nh.iter_mut()).zip(q.iter().zip(&pot)) {
            *a = Complex64::new(qi, 0.0);
            *b = Complex64::new(pi * qi, 0.0);
        }
        fft::forward(&mut qh, dim, n);
        fft::forward(&mut nh, dim, n);
        let num: f64 = qh.iter().zip(&symbol).map(|(z, l)| l * z.norm_sqr()).sum();
        let den: f64 = qh.iter().zip(&nh).map(|(a, b)| (a.conj() * b).re).sum();
        if !(den > 0.0) {
            return Err(Error::CollapseToZero { iterations: it });
        }
        let alpha = (num / den).powf(1.5);
        for (z, l) in nh.iter_mut().zip(&symbol) {
            *z *= alpha / l;
        }
        fft::inverse_normalized(&mut nh, dim, n);
        let mut diff = 0.0;
        let mut norm = 0.0;
        let mut imag = 0.0f64;
        let mut modulus = 0.0f64;
        for (old, z) in q.iter_mut().zip(&nh) {
            imag = imag.max(z.im.abs());
            modulus = modulus.max(z.norm());
            diff += (z.re - *old).powi(2);
            norm += z.re * z.re;
            *old = z.re;
        }
        worst_imag = worst_imag.max(imag / modulus.max(f64::MIN_POSITIVE));
        let change = (diff / norm).sqrt();
        info = IterationInfo { iterations: it, last_change: change, last_alpha: alpha, converged: false };
        if (norm * h_n).sqrt() < 1e-10 {
            return Err(Error::CollapseToZero { iterations: it });
        }
        log::trace!("iteration {it}: alpha = {alpha:.15}, change = {change:.3e}");
        if change < opts.tol {
            info.converged = true;
            break;
        }
    }
    if worst_imag > 1e-12 {
        log::warn!("discarded imaginary parts reached {worst_imag:.2e} of the peak");
    }
    let profile = SpectralField::from_values(grid, q.into_iter().map(|v| Complex64::new(v, 0.0)).collect(), Space::Physical)?;
    let gs = GroundState::from_profile(profile, mult, info)?;
    if !info.converged {
        return Err(Error::NonConvergence {
            iterations: info.iterations,
            last_change: info.last_change,
            partial: Box::new(gs),
        });
    }
    Ok(gs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn tiny_iteration_budget_reports_partial_state() {
        let g = make_grid(2, 32, 16.0).unwrap();
        let p = PhysParams::canonical();
        let opts = SolverOptions { max_iter: 2, ..Default::default() };
        match solve_ground_state(&p, &g, None, &opts) {
            Err(Error::NonConvergence { iterations, partial, .. }) => {
                assert_eq!(iterations, 2);
                assert!(!partial.report.converged);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_signed_seed() {
        let g = make_grid(2, 32, 16.0).unwrap();
        let p = PhysParams::canonical();
        let seed = SpectralField::gaussian(&g, -1.0, 1.0);
        assert!(solve_ground_state(&p, &g, Some(&seed), &SolverOptions::default()).is_err());
        let zero = SpectralField::zeros(&g);
        assert!(solve_ground_state(&p, &g, Some(&zero), &SolverOptions::default()).is_err());
    }

    #[test]
    fn converges_on_small_grid() {
        let g = make_grid(2, 64, 32.0).unwrap();
        let p = PhysParams::canonical();
        let gs = solve_ground_state(&p, &g, None, &SolverOptions::default()).unwrap();
        assert!(gs.report.converged);
        assert!(gs.report.el_residual < 1e-8, "{}", gs.report.el_residual);
        assert!((gs.report.last_alpha - 1.0).abs() < 1e-10);
        assert!(gs.q.values().iter().all(|z| z.re > 0.0));
    }
}
