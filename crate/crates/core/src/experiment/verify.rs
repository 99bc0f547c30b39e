use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::commands::{obtain_ground_state, write_artifact};
use super::config::{GridSection, RunConfig};
use super::fields::random_smooth_field;
use crate::diagnostics::{
    balakrishnan_check, virial_rate_fd, virial_rhs, weighted_virial, CutoffPhi, QuadratureRule,
};
use crate::error::Result;
use crate::evolution::{evolve, evolve_observed, invariance_audit, StepperConfig};
use crate::functionals::{gn_ratio, Membership};
use crate::ground_state::{solve_ground_state_with, thresholds, GroundState};
use crate::params::PhysParams;
use crate::spectral::{make_grid, sobolev_norm, MultiplierSet, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured residual.
    pub value: f64,
    /// The check passes when `value <= tolerance`.
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), value, tolerance, passed: value <= tolerance }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<28} {:>11.3e}  (tol {:.1e})", self.name, self.value, self.tolerance)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn state_on(cfg: &RunConfig, p: &PhysParams, grid: GridSection) -> Result<(MultiplierSet, GroundState)> {
    let mult = MultiplierSet::new(&make_grid(p.dim(), grid.n, grid.len)?, p)?;
    let gs = solve_ground_state_with(&mult, None, &cfg.solver)?;
    Ok((mult, gs))
}

/// Runs the identity suite and writes `verify.json`.
///
/// Ground-state identities and the virial cross-check use the verify grids;
/// everything else runs on the main grid, where a configured snapshot
/// supplies `Q`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let p = cfg.params()?;
    let mut checks = Vec::new();

    // loading first makes a bad snapshot abort before any long computation
    let mult = MultiplierSet::new(&cfg.grid_spec()?, &p)?;
    let gs = obtain_ground_state(cfg, &mult)?;

    let (id_mult, id_gs) = state_on(cfg, &p, cfg.verify.identity_grid)?;
    let r = &id_gs.report;
    checks.push(Check::new("euler_lagrange", r.el_residual, 1e-8));
    checks.push(Check::new("pohozaev_r1", r.pohozaev_r1.abs(), 1e-5));
    checks.push(Check::new("pohozaev_r2", r.pohozaev_r2.abs(), 1e-5));
    checks.push(Check::new("chain_hs", r.chain_hs.abs(), 1e-5));
    checks.push(Check::new("chain_l2", r.chain_l2.abs(), 1e-5));
    checks.push(Check::new("cgn_two_ways", (r.cgn_a - r.cgn_b).abs() / r.cgn_a, 1e-4));
    checks.push(Check::new("gn_ratio_at_q", (gn_ratio(&id_gs.q, &id_mult, id_gs.cgn())? - 1.0).abs(), 1e-5));

    let th = match cfg.verify.threshold_grid {
        Some(grid) if grid != cfg.verify.identity_grid => {
            let (m, g) = state_on(cfg, &p, grid)?;
            thresholds(&g, &m)?
        }
        _ => thresholds(&id_gs, &id_mult)?,
    };
    checks.push(Check::new("me_closed_form", th.me_rel_err, 1e-5));
    checks.push(Check::new("grad_closed_form", th.grad_rel_err, 1e-5));
    checks.push(Check::new("threshold_ratio", (th.ratio - th.ratio_expected).abs() / th.ratio_expected, 1e-5));

    let grid = mult.grid().clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.io.seed);
    let fields: Vec<SpectralField> = (0..cfg.verify.random_fields).map(|_| random_smooth_field(&grid, &mut rng)).collect();
    let mut worst_gn = f64::NEG_INFINITY;
    let mut worst_weighted: f64 = 0.0;
    for f in &fields {
        worst_gn = worst_gn.max(gn_ratio(f, &mult, gs.cgn())?);
        let scale = fields_scale(f);
        worst_weighted = worst_weighted.max(-weighted_virial(f, &p)? / scale);
    }
    if !fields.is_empty() {
        checks.push(Check::new("gn_ratio_random_excess", worst_gn - 1.0, 1e-4));
        checks.push(Check::new("weighted_virial_negativity", worst_weighted, 1e-10));
    }

    let quad = QuadratureRule::default();
    let gaussian = SpectralField::gaussian(&grid, 1.0, 1.0);
    let bk = balakrishnan_check(&gaussian, &p, &quad);
    checks.push(Check::new("balakrishnan_gaussian", bk.rel_err, 1e-4));
    let worst_bk = fields.iter().take(10).map(|f| balakrishnan_check(f, &p, &quad).rel_err).fold(0.0, f64::max);
    checks.push(Check::new("balakrishnan_random", worst_bk, 1e-4));
    let doubled = balakrishnan_check(&gaussian, &p, &quad.with_nodes(2 * quad.len())?).rel_err;
    checks.push(Check::new("balakrishnan_refinement", doubled, (0.5 * bk.rel_err).max(1e-9)));

    let u0 = gs.q.scaled_real(0.95);
    let mut drifts = Vec::new();
    for dt in [4e-3, 2e-3, 1e-3] {
        let rec = evolve(&u0, &mult, &StepperConfig::fixed_step(dt, 1.0), &gs)?;
        if dt == 1e-3 {
            checks.push(Check::new("mass_drift", rec.mass_drift(), 1e-10));
            checks.push(Check::new("energy_drift", rec.energy_drift(), 1e-6));
            let audit = invariance_audit(&rec, &p)?;
            checks.push(Check::new("k1_flow_invariance", if audit.passed { 0.0 } else { 1.0 }, 0.0));
            checks.push(Check::new("comparability_margin", -audit.min_lower_margin.min(audit.min_upper_margin), 0.0));
            checks.push(Check::new("coercivity_gap", -audit.min_gap_ratio, 0.0));
        }
        drifts.push(rec.energy_drift());
    }
    let order = |a: f64, b: f64| (a / b).log2();
    let orders = [order(drifts[0], drifts[1]), order(drifts[1], drifts[2])];
    let worst_order = orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max);
    checks.push(Check::new("energy_drift_order_dev", worst_order, 0.2));

    let virial_state = match cfg.verify.virial_grid {
        Some(g) if g != cfg.grid => Some(state_on(cfg, &p, g)?),
        _ => None,
    };
    let (mult, gs) = match &virial_state {
        Some((m, g)) => (m, g),
        None => (&mult, &gs),
    };
    let u0 = gs.q.scaled_real(0.95);
    let phi = CutoffPhi::default_for(mult.grid())?;
    let mut fd_ratio: f64 = 0.0;
    let mut min_total = f64::INFINITY;
    let mut fd_error = None;
    let mut observer = |_: f64, u: &SpectralField| {
        let step = virial_rhs(u, &phi, &p, mult, &quad).and_then(|v| Ok((v, virial_rate_fd(u, mult, &phi, 1e-4)?)));
        match step {
            Ok((v, fd)) => {
                min_total = min_total.min(v.total());
                fd_ratio = fd_ratio.max((fd - v.total()).abs() / (1e-3 * v.total().abs()).max(v.a_r));
            }
            Err(e) => {
                fd_error.get_or_insert(e);
            }
        }
        Vec::new()
    };
    let cfg_virial = StepperConfig { record_every: 100, ..StepperConfig::fixed_step(1e-3, 1.0) };
    let (rec, _) = evolve_observed(&u0, mult, &cfg_virial, gs, Some(&mut observer))?;
    if let Some(e) = fd_error {
        return Err(e);
    }
    checks.push(Check::new("virial_fd_consistency", fd_ratio, 1.0));
    if rec.membership_series[0] == Membership::K1 {
        checks.push(Check::new("virial_k1_positivity", if min_total > 0.0 { 0.0 } else { -min_total }, 0.0));
    }

    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport { checks, passed };
    write_artifact(cfg, "verify.json", &report)?;
    Ok(report)
}

/// `‖u‖²_{H^1}`-like magnitude used to scale rounding tolerances.
fn fields_scale(u: &SpectralField) -> f64 {
    let a = sobolev_norm(u, 0.0);
    let b = sobolev_norm(u, 1.0);
    (a * a + b * b).max(f64::MIN_POSITIVE)
}
