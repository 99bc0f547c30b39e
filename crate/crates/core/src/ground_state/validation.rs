use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::GroundState;
use crate::error::Result;
use crate::functionals::{hartree_energy, hs_seminorm_sq, invariant_pair, mass};
use crate::params::PhysParams;
use crate::spectral::{fft, hartree_potential_values, MultiplierSet, SpectralField};

/// Left sides of the two Pohozaev identities divided by `‖Q‖²_{Ḣ^s}`.
pub fn pohozaev_residuals(q: &SpectralField, p: &PhysParams, mult: &MultiplierSet) -> Result<(f64, f64)> {
    q.require_physical("pohozaev_residuals")?;
    q.require_same_grid(mult.grid(), "pohozaev_residuals")?;
    let (n, s, g) = (p.dim() as f64, p.s(), p.gamma());
    let a = hs_seminorm_sq(q, mult);
    let b = mass(q);
    let v = hartree_energy(q, mult);
    let r1 = (a + b - v) / a;
    let r2 = ((n - 2.0 * s) / 2.0 * a + n / 2.0 * b - (2.0 * n - g) / 4.0 * v) / a;
    Ok((r1, r2))
}

/// `‖(−Δ)^s Q + Q − (W ∗ |Q|²)Q‖₂ / ‖Q‖₂`.
pub fn el_residual(q: &SpectralField, mult: &MultiplierSet) -> Result<f64> {
    q.require_physical("el_residual")?;
    let g = q.grid();
    let pot = hartree_potential_values(&q.density(), mult);
    let mut buf = q.values().to_vec();
    fft::forward(&mut buf, g.dim(), g.n());
    for (z, w) in buf.iter_mut().zip(mult.frac_lap_s()) {
        *z *= 1.0 + w;
    }
    fft::inverse_normalized(&mut buf, g.dim(), g.n());
    let h_n = g.cell_volume();
    let res: f64 = buf
        .iter()
        .zip(q.values())
        .zip(&pot)
        .map(|((lq, qv), v)| (lq - qv * *v).norm_sqr())
        .sum::<f64>()
        * h_n;
    Ok((res / mass(q)).sqrt())
}

/// The two evaluations of the sharp constant: from `‖Q‖₂, ‖Q‖_{Ḣ^s}` and from `‖Q‖₂` alone.
pub fn cgn_both_ways(gs: &GroundState) -> (f64, f64) {
    (gs.report.cgn_a, gs.report.cgn_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub me_direct: f64,
    pub grad_direct: f64,
    pub me_closed: f64,
    pub grad_closed: f64,
    pub me_rel_err: f64,
    pub grad_rel_err: f64,
    /// `grad_Q / me_Q` from the direct values.
    pub ratio: f64,
    /// `2γ / (γ − 2s)`.
    pub ratio_expected: f64,
}

/// Direct and closed-form thresholds, recomputed from the stored profile.
pub fn thresholds(gs: &GroundState, mult: &MultiplierSet) -> Result<Thresholds> {
    let p = &gs.params;
    let (s, g) = (p.s(), p.gamma());
    let pair = invariant_pair(&gs.q, p, mult)?;
    let power = mass(&gs.q).sqrt().powf(2.0 * s / p.s_c());
    let me_closed = (g - 2.0 * s) / (2.0 * (4.0 * s - g)) * power;
    let grad_closed = g / (4.0 * s - g) * power;
    Ok(Thresholds {
        me_direct: pair.me,
        grad_direct: pair.grad,
        me_closed,
        grad_closed,
        me_rel_err: (pair.me - me_closed).abs() / me_closed,
        grad_rel_err: (pair.grad - grad_closed).abs() / grad_closed,
        ratio: pair.grad / pair.me,
        ratio_expected: 2.0 * g / (g - 2.0 * s),
    })
}

/// Largest spread of `|u|` among grid points at the same lattice distance
/// from the center, over points within a quarter box of it, relative to the peak.
pub fn radial_deviation(u: &SpectralField) -> f64 {
    let g = u.grid();
    let n = g.n() as i64;
    let reach = n / 4;
    let mut groups: HashMap<i64, (f64, f64)> = HashMap::new();
    for (i, z) in u.values().iter().enumerate() {
        let idx = g.unflatten(i);
        let mut r2 = 0i64;
        let mut inside = true;
        for &c in &idx[..g.dim()] {
            let d = c as i64 - n / 2;
            inside &= d.abs() <= reach;
            r2 += d * d;
        }
        if !inside || r2 > reach * reach {
            continue;
        }
        let m = z.norm();
        let e = groups.entry(r2).or_insert((m, m));
        e.0 = e.0.min(m);
        e.1 = e.1.max(m);
    }
    let spread = groups.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max);
    spread / u.max_modulus().max(f64::MIN_POSITIVE)
}
