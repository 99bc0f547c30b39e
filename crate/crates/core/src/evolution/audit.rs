use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Propagator, RunRecord};
use crate::error::{Error, Result};
use crate::functionals::{comparability_from_parts, mass, Membership};
use crate::ground_state::GroundState;
use crate::params::PhysParams;
use crate::spectral::MultiplierSet;

/// Flow-invariance report for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceAudit {
    pub initial: Membership,
    pub initial_me_ratio: f64,
    /// Sample indices whose K1/K2 label differs from the initial one.
    pub flips: Vec<usize>,
    /// Every sample carries the initial label.
    pub uniform: bool,
    /// `1 − max grad_ratio(t)` on K1 runs.
    pub delta0: Option<f64>,
    pub min_lower_margin: f64,
    pub min_upper_margin: f64,
    /// Smallest `(‖D^s u‖² − (γ/4s)V) / ‖D^s u‖²` over the run.
    pub min_gap_ratio: f64,
    pub passed: bool,
}

pub fn invariance_audit(rec: &RunRecord, p: &PhysParams) -> Result<InvarianceAudit> {
    if rec.is_empty() {
        return Err(Error::InvalidArgument("empty run record".into()));
    }
    let initial = rec.membership_series[0];
    let initial_me_ratio = rec.me_ratio_series[0];
    let flips: Vec<usize> = match initial {
        Membership::K1 | Membership::K2 if initial_me_ratio < 1.0 => rec
            .membership_series
            .iter()
            .enumerate()
            .filter(|(_, m)| matches!(m, Membership::K1 | Membership::K2) && **m != initial)
            .map(|(i, _)| i)
            .collect(),
        _ => Vec::new(),
    };
    for &i in &flips {
        log::warn!("membership flipped from {initial} to {} at sample {i} (t = {})", rec.membership_series[i], rec.times[i]);
    }
    let uniform = rec.membership_series.iter().all(|m| *m == initial);
    let mut min_lower = f64::INFINITY;
    let mut min_upper = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    for (a, v) in rec.hs_series.iter().zip(&rec.v_series) {
        let r = comparability_from_parts(*a, *v, p.s(), p.gamma());
        min_lower = min_lower.min(r.lower_margin);
        min_upper = min_upper.min(r.upper_margin);
        min_gap = min_gap.min(r.gap_ratio());
    }
    let delta0 = (initial == Membership::K1)
        .then(|| 1.0 - rec.grad_ratio_series.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let k1_ok = match delta0 {
        Some(d) => d > 0.0 && min_lower >= 0.0 && min_upper >= 0.0 && min_gap > 0.0,
        None => true,
    };
    Ok(InvarianceAudit {
        initial,
        initial_me_ratio,
        flips: flips.clone(),
        uniform,
        delta0,
        min_lower_margin: min_lower,
        min_upper_margin: min_upper,
        min_gap_ratio: min_gap,
        passed: flips.is_empty() && k1_ok,
    })
}

/// Largest `‖u(t) − e^{it}Q‖₂ / ‖Q‖₂` over every step of a run started at `Q`.
pub fn soliton_orbit_check(gs: &GroundState, mult: &MultiplierSet, t_end: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) || t_end < 0.0 {
        return Err(Error::InvalidArgument(format!("need dt > 0 and T >= 0, got {dt} and {t_end}")));
    }
    let norm = mass(&gs.q).sqrt();
    let mut prop = Propagator::new(&gs.q, mult, true, false)?;
    let steps = (t_end / dt).round() as usize;
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        prop.step(dt, None);
        let exact = gs.q.scaled(Complex64::from_polar(1.0, prop.time()));
        worst = worst.max(prop.field().distance(&exact) / norm);
    }
    Ok(worst)
}
