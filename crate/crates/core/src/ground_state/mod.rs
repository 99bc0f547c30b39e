//! Ground state `Q` of `(−Δ)^s Q + Q − (W ∗ Q²)Q = 0` and its validation.

mod snapshot;
mod solver;
mod validation;

pub use snapshot::{load_snapshot, save_snapshot, sidecar_path, Snapshot, SnapshotHeader, CONVENTION_TAG};
pub use solver::{solve_ground_state, solve_ground_state_with, SolverOptions};
pub use validation::{cgn_both_ways, el_residual, pohozaev_residuals, radial_deviation, thresholds, Thresholds};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functionals::{hartree_energy, hs_seminorm_sq, invariant_pair, mass};
use crate::params::PhysParams;
use crate::spectral::{MultiplierSet, SpectralField};

/// Scalar validation data attached to a computed ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateReport {
    /// `‖Q‖₂`
    pub l2: f64,
    /// `‖Q‖_{Ḣ^s}`
    pub hs: f64,
    /// `V(Q)`
    pub potential: f64,
    /// `E[Q]`
    pub energy: f64,
    pub el_residual: f64,
    pub pohozaev_r1: f64,
    pub pohozaev_r2: f64,
    /// `|V − (4s/γ)‖Q‖²_{Ḣ^s}| / V`
    pub chain_hs: f64,
    /// `|V − (4s/(4s−γ))‖Q‖₂²| / V`
    pub chain_l2: f64,
    pub cgn_a: f64,
    pub cgn_b: f64,
    pub me_q: f64,
    pub grad_q: f64,
    pub me_q_closed: f64,
    pub grad_q_closed: f64,
    /// `Q` at the box edge over `Q(0)`.
    pub tail_ratio: f64,
    pub radial_deviation: f64,
    pub max_imag: f64,
    pub iterations: usize,
    pub last_change: f64,
    pub last_alpha: f64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub q: SpectralField,
    pub params: PhysParams,
    pub report: GroundStateReport,
}

/// Iteration bookkeeping handed to [`GroundState::from_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationInfo {
    pub iterations: usize,
    pub last_change: f64,
    pub last_alpha: f64,
    pub converged: bool,
}

impl IterationInfo {
    /// For profiles that did not come out of the solver.
    pub fn external() -> Self {
        Self { iterations: 0, last_change: f64::NAN, last_alpha: f64::NAN, converged: true }
    }
}

impl GroundState {
    /// Evaluates every validation quantity on a given profile.
    pub fn from_profile(q: SpectralField, mult: &MultiplierSet, info: IterationInfo) -> Result<Self> {
        let p = *mult.params();
        let (s, g) = (p.s(), p.gamma());
        let b = mass(&q);
        let a = hs_seminorm_sq(&q, mult);
        let v = hartree_energy(&q, mult);
        let (r1, r2) = pohozaev_residuals(&q, &p, mult)?;
        let pair = invariant_pair(&q, &p, mult)?;
        let l2 = b.sqrt();
        let hs = a.sqrt();
        let cgn_a = (4.0 * s / g) / (l2.powf((4.0 * s - g) / s) * hs.powf((g - 2.0 * s) / s));
        let cgn_b = ((4.0 * s - g) / g).powf(g / (2.0 * s)) * 4.0 * s / ((4.0 * s - g) * b);
        let power = l2.powf(2.0 * s / p.s_c());
        let grid = q.grid().clone();
        let peak = q.max_modulus();
        let center: usize = (0..grid.dim()).map(|a| (grid.n() / 2) * grid.n().pow((grid.dim() - 1 - a) as u32)).sum();
        // x_0 = -L/2 on the first axis, other coordinates at the origin
        let edge = q.values()[center - (grid.n() / 2) * grid.n().pow(grid.dim() as u32 - 1)].norm();
        let report = GroundStateReport {
            l2,
            hs,
            potential: v,
            energy: 0.5 * a - 0.25 * v,
            el_residual: el_residual(&q, mult)?,
            pohozaev_r1: r1,
            pohozaev_r2: r2,
            chain_hs: (v - 4.0 * s / g * a).abs() / v,
            chain_l2: (v - 4.0 * s / (4.0 * s - g) * b).abs() / v,
            cgn_a,
            cgn_b,
            me_q: pair.me,
            grad_q: pair.grad,
            me_q_closed: (g - 2.0 * s) / (2.0 * (4.0 * s - g)) * power,
            grad_q_closed: g / (4.0 * s - g) * power,
            tail_ratio: edge / peak,
            radial_deviation: radial_deviation(&q),
            max_imag: q.max_imag(),
            iterations: info.iterations,
            last_change: info.last_change,
            last_alpha: info.last_alpha,
            converged: info.converged,
        };
        if report.tail_ratio > 1e-8 {
            log::warn!(
                "Q at the box edge is {:.2e} of its peak; the box may be too small for the algebraic tail",
                report.tail_ratio
            );
        }
        Ok(Self { q, params: p, report })
    }

    pub fn grid(&self) -> &crate::spectral::GridSpec {
        self.q.grid()
    }

    /// Effective `C_GN`, taken from the norm formula.
    pub fn cgn(&self) -> f64 {
        self.report.cgn_a
    }

    /// Threshold `M[Q]^{(s−s_c)/s_c} E[Q]`, direct evaluation.
    pub fn me_q(&self) -> f64 {
        self.report.me_q
    }

    /// Threshold `M[Q]^{(s−s_c)/s_c} ‖Q‖²_{Ḣ^s}`, direct evaluation.
    pub fn grad_q(&self) -> f64 {
        self.report.grad_q
    }
}
