//! Time integration, conservation monitoring and blow-up detection.

mod audit;
mod io;
mod propagator;

pub use audit::{invariance_audit, soliton_orbit_check, InvarianceAudit};
pub use io::{write_csv, write_summary, RunSummary};
pub use propagator::{strang_step, Propagator, StepInfo};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{classify_against, hartree_energy, InvariantPair, Membership};
use crate::ground_state::GroundState;
use crate::params::PhysParams;
use crate::spectral::{lp_norm, GridSpec, MultiplierSet, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepperConfig {
    pub dt: f64,
    /// Horizon; `None` means [`default_t_end`].
    pub t_end: Option<f64>,
    pub record_every: usize,
    pub dt_min: f64,
    pub blowup_grad_factor: f64,
    pub tail_fraction_max: f64,
    /// Cap on the nonlinear phase proxy per step, see [`adapt_dt`].
    pub c_adapt: f64,
    pub adaptive: bool,
    pub dealias: bool,
    /// Switches the Hartree term off (free evolution).
    pub nonlinear: bool,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: None,
            record_every: 10,
            dt_min: 1e-7,
            blowup_grad_factor: 10.0,
            tail_fraction_max: 0.1,
            c_adapt: 0.1,
            adaptive: true,
            dealias: false,
            nonlinear: true,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_min > 0.0 && self.dt > self.dt_min) {
            return Err(Error::InvalidArgument(format!("need dt > dt_min > 0, got {} and {}", self.dt, self.dt_min)));
        }
        if !(self.blowup_grad_factor > 1.0) {
            return Err(Error::InvalidArgument("blowup_grad_factor must exceed 1".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be positive".into()));
        }
        if let Some(t) = self.t_end {
            if !(t >= 0.0) {
                return Err(Error::InvalidArgument(format!("t_end = {t} is negative")));
            }
        }
        Ok(())
    }

    pub fn fixed_step(dt: f64, t_end: f64) -> Self {
        Self { dt, t_end: Some(t_end), adaptive: false, dt_min: dt.min(1e-7) * 0.5, ..Default::default() }
    }
}

/// `L / (4 · 2s ξ_max^{2s−1})`: time for the fastest resolved wave to cross a quarter box.
pub fn default_t_end(grid: &GridSpec, p: &PhysParams) -> f64 {
    let s = p.s();
    let speed = 2.0 * s * grid.max_wavenumber().powf(2.0 * s - 1.0);
    grid.len() / (4.0 * speed)
}

/// `min(dt, c_adapt / (max|u|² Ŵ(0)))`, floored at `dt_min`.
pub fn adapt_dt(u: &SpectralField, cfg: &StepperConfig, mult: &MultiplierSet) -> f64 {
    let peak = u.max_modulus();
    adapt_from_peak(peak * peak, cfg, mult)
}

pub(crate) fn adapt_from_peak(peak_sq: f64, cfg: &StepperConfig, mult: &MultiplierSet) -> f64 {
    let proxy = peak_sq * mult.kernel_at_zero();
    let cap = if proxy > 0.0 { cfg.c_adapt / proxy } else { f64::INFINITY };
    cfg.dt.min(cap).max(cfg.dt_min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    GlobalDispersing,
    BlowUp { t_star: f64, resolution_lost: bool },
    Soliton,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::GlobalDispersing => f.write_str("GlobalDispersing"),
            Verdict::BlowUp { t_star, resolution_lost: false } => write!(f, "BlowUp(t*={t_star:.4})"),
            Verdict::BlowUp { t_star, resolution_lost: true } => write!(f, "BlowUp(t*={t_star:.4}, resolution lost)"),
            Verdict::Soliton => f.write_str("Soliton"),
            Verdict::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

/// Why stepping stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    Completed,
    GradientBlowUp,
    TailResolutionLost,
}

/// Diagnostics sampled along one run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunRecord {
    pub times: Vec<f64>,
    pub dt_series: Vec<f64>,
    pub mass_series: Vec<f64>,
    pub energy_series: Vec<f64>,
    /// `‖D^s u‖₂²` (squared).
    pub hs_series: Vec<f64>,
    /// `‖u‖_{Ḣ^{s_c}}`.
    pub hsc_series: Vec<f64>,
    pub v_series: Vec<f64>,
    pub lpc_series: Vec<f64>,
    pub me_ratio_series: Vec<f64>,
    pub grad_ratio_series: Vec<f64>,
    pub membership_series: Vec<Membership>,
    pub tail_series: Vec<f64>,
    /// Running `(Σ dt ‖u‖_{r_c}^{q_c})^{1/q_c}`.
    pub strichartz_series: Vec<f64>,
    /// `‖u(t) − e^{it}Q‖₂ / ‖Q‖₂` when `Q` lives on the run's grid.
    pub soliton_dev_series: Vec<f64>,
    /// Extra columns from an observer, in insertion order.
    pub extra: Vec<(String, Vec<f64>)>,
    pub strichartz_accum: f64,
    pub steps: usize,
    pub stop: Option<StopReason>,
    pub verdict: Option<Verdict>,
}

impl RunRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict.unwrap_or(Verdict::Inconclusive)
    }

    pub fn mass_drift(&self) -> f64 {
        let m0 = self.mass_series[0];
        self.mass_series.iter().map(|m| (m - m0).abs() / m0).fold(0.0, f64::max)
    }

    /// `max |E(t) − E(0)| / max(|E(0)|, ‖D^s u0‖²)`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy_series[0];
        let scale = e0.abs().max(self.hs_series[0]);
        self.energy_series.iter().map(|e| (e - e0).abs() / scale).fold(0.0, f64::max)
    }

    pub fn extra_column(&self, name: &str) -> Option<&[f64]> {
        self.extra.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Hook called at every sample with the time and the physical field; returns
/// named values appended as extra record columns.
pub type Observer<'o> = dyn FnMut(f64, &SpectralField) -> Vec<(String, f64)> + 'o;

/// Runs to `t_end`, the blow-up trigger, or tail refusal.
pub fn evolve(u0: &SpectralField, mult: &MultiplierSet, cfg: &StepperConfig, gs: &GroundState) -> Result<RunRecord> {
    evolve_observed(u0, mult, cfg, gs, None).map(|(rec, _)| rec)
}

/// [`evolve`] with an optional observer; also returns the final field.
pub fn evolve_observed(
    u0: &SpectralField,
    mult: &MultiplierSet,
    cfg: &StepperConfig,
    gs: &GroundState,
    mut observer: Option<&mut Observer<'_>>,
) -> Result<(RunRecord, SpectralField)> {
    cfg.validate()?;
    u0.require_physical("evolve")?;
    let p = *mult.params();
    if crate::functionals::mass(u0) == 0.0 {
        return Err(Error::ZeroField("evolution needs positive mass"));
    }
    let t_end = cfg.t_end.unwrap_or_else(|| default_t_end(mult.grid(), &p));
    let limit = default_t_end(mult.grid(), &p);
    if t_end > limit * (1.0 + 1e-12) {
        log::warn!("t_end = {t_end} exceeds the wrap-around horizon {limit:.3}; late samples may show recurrences");
    }
    let q_on_grid = (gs.grid() == mult.grid()).then_some(&gs.q);
    let mut prop = Propagator::new(u0, mult, cfg.nonlinear, cfg.dealias)?;
    let mut rec = RunRecord::default();
    let (qc, rc) = (p.q_c(), p.q_c());
    let mut strich_sum = 0.0;

    let mut sample = |prop: &Propagator, rec: &mut RunRecord, dt: f64, strich: f64| {
        let u = prop.field();
        let t = prop.time();
        let m = prop.mass();
        let a = prop.hs_sq();
        let v = hartree_energy(&u, mult);
        let w = m.powf(p.mass_exponent());
        let pair = InvariantPair { me: w * (0.5 * a - 0.25 * v), grad: w * a };
        let member = classify_against(&pair, gs.me_q(), gs.grad_q());
        rec.times.push(t);
        rec.dt_series.push(dt);
        rec.mass_series.push(m);
        rec.energy_series.push(0.5 * a - 0.25 * v);
        rec.hs_series.push(a);
        rec.hsc_series.push(prop.sobolev_sq(p.s_c()).sqrt());
        rec.v_series.push(v);
        rec.lpc_series.push(lp_norm(&u, p.p_c()));
        rec.me_ratio_series.push(member.me_ratio);
        rec.grad_ratio_series.push(member.grad_ratio);
        rec.membership_series.push(member.verdict);
        rec.tail_series.push(prop.tail_fraction());
        rec.strichartz_series.push(strich.powf(1.0 / qc));
        let dev = match q_on_grid {
            Some(q) => {
                let rotated = q.scaled(num_complex::Complex64::from_polar(1.0, t));
                u.distance(&rotated) / crate::functionals::mass(q).sqrt()
            }
            None => f64::NAN,
        };
        rec.soliton_dev_series.push(dev);
        if let Some(obs) = observer.as_mut() {
            for (name, value) in obs(t, &u) {
                match rec.extra.iter_mut().find(|(n, _)| *n == name) {
                    Some((_, col)) => col.push(value),
                    None => rec.extra.push((name, vec![value])),
                }
            }
        }
    };

    sample(&prop, &mut rec, 0.0, 0.0);
    let a0 = rec.hs_series[0];
    let mut peak_sq = u0.max_modulus().powi(2);
    let mut stop = StopReason::Completed;
    let eps = 1e-12 * t_end.max(1.0);
    while prop.time() < t_end - eps {
        let mut dt = if cfg.adaptive { adapt_from_peak(peak_sq, cfg, mult) } else { cfg.dt };
        dt = dt.min(t_end - prop.time());
        let info = prop.step(dt, Some(rc));
        peak_sq = info.peak_sq;
        strich_sum += dt * info.lr_integral.powf(qc / rc);
        rec.steps += 1;
        let a = prop.hs_sq();
        let done = prop.time() >= t_end - eps;
        if a > cfg.blowup_grad_factor * a0 {
            stop = StopReason::GradientBlowUp;
        } else if prop.tail_fraction() > cfg.tail_fraction_max {
            stop = StopReason::TailResolutionLost;
        }
        if stop != StopReason::Completed || done || rec.steps % cfg.record_every == 0 {
            sample(&prop, &mut rec, dt, strich_sum);
        }
        if stop != StopReason::Completed {
            break;
        }
    }
    rec.strichartz_accum = strich_sum.powf(1.0 / qc);
    rec.stop = Some(stop);
    rec.verdict = Some(decide_verdict(&rec, stop, prop.time()));
    let last = prop.field();
    Ok((rec, last))
}

fn decide_verdict(rec: &RunRecord, stop: StopReason, t: f64) -> Verdict {
    let last_grad = *rec.grad_ratio_series.last().unwrap_or(&0.0);
    match stop {
        StopReason::GradientBlowUp => return Verdict::BlowUp { t_star: t, resolution_lost: false },
        StopReason::TailResolutionLost if last_grad > 1.0 => {
            return Verdict::BlowUp { t_star: t, resolution_lost: true }
        }
        StopReason::TailResolutionLost => return Verdict::Inconclusive,
        StopReason::Completed => {}
    }
    if rec.soliton_dev_series.iter().all(|d| *d < 1e-3) {
        return Verdict::Soliton;
    }
    let v0 = rec.v_series[0];
    let v_end = *rec.v_series.last().unwrap();
    if rec.grad_ratio_series.iter().all(|g| *g < 1.0) && v_end < 0.5 * v0 {
        return Verdict::GlobalDispersing;
    }
    Verdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{energy, mass};
    use crate::ground_state::{solve_ground_state_with, SolverOptions};
    use crate::spectral::make_grid;

    fn setup() -> (MultiplierSet, GroundState) {
        let g = make_grid(2, 64, 32.0).unwrap();
        let m = MultiplierSet::new(&g, &PhysParams::canonical()).unwrap();
        let gs = solve_ground_state_with(&m, None, &SolverOptions::default()).unwrap();
        (m, gs)
    }

    #[test]
    fn zero_step_is_identity() {
        let (m, _) = setup();
        let u = SpectralField::gaussian(m.grid(), 1.0, 1.5);
        let v = strang_step(&u, &m, 0.0).unwrap();
        assert!(v.distance(&u) < 1e-14);
    }

    #[test]
    fn single_step_conserves_mass() {
        let (m, _) = setup();
        let u = SpectralField::gaussian(m.grid(), 1.0, 1.5);
        let v = strang_step(&u, &m, 0.01).unwrap();
        assert!((mass(&v) - mass(&u)).abs() < 1e-14 * mass(&u));
    }

    #[test]
    fn merged_propagator_matches_plain_step() {
        let (m, _) = setup();
        let u = SpectralField::gaussian(m.grid(), 1.2, 1.5);
        let mut prop = Propagator::new(&u, &m, true, false).unwrap();
        let mut v = u.clone();
        for _ in 0..5 {
            prop.step(0.01, None);
            v = strang_step(&v, &m, 0.01).unwrap();
        }
        assert!(prop.field().distance(&v) < 1e-12);
    }

    #[test]
    fn one_step_energy_error_is_fourth_order() {
        let (m, _) = setup();
        let u = SpectralField::from_fn(m.grid(), |x| {
            let r2 = (x[0] - 0.5).powi(2) + x[1] * x[1];
            num_complex::Complex64::from_polar(1.5 * (-r2).exp(), 0.8 * x[0])
        });
        let e0 = energy(&u, &m);
        let err = |dt: f64| (energy(&strang_step(&u, &m, dt).unwrap(), &m) - e0).abs();
        let ratio = err(0.02) / err(0.01);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn adapt_dt_caps_and_scales() {
        let (m, _) = setup();
        let cfg = StepperConfig::default();
        let small = SpectralField::gaussian(m.grid(), 1e-3, 1.0);
        assert_eq!(adapt_dt(&small, &cfg, &m), cfg.dt);
        let big = SpectralField::gaussian(m.grid(), 10.0, 1.0);
        let bigger = SpectralField::gaussian(m.grid(), 20.0, 1.0);
        let (a, b) = (adapt_dt(&big, &cfg, &m), adapt_dt(&bigger, &cfg, &m));
        assert!(a < cfg.dt && (a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let bad = StepperConfig { dt: 1e-8, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = StepperConfig { blowup_grad_factor: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn soliton_run_is_classified() {
        let (m, gs) = setup();
        let cfg = StepperConfig { t_end: Some(0.5), ..Default::default() };
        let rec = evolve(&gs.q, &m, &cfg, &gs).unwrap();
        assert_eq!(rec.verdict(), Verdict::Soliton);
        assert!(rec.membership_series.iter().all(|v| *v == Membership::Boundary));
        assert!(rec.mass_drift() < 1e-12);
    }
}
