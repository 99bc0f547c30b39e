//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use fhartree::diagnostics::{
    balakrishnan_check, virial_rate_fd, virial_rhs, weighted_virial, CutoffPhi, QuadratureRule,
};
use fhartree::evolution::{
    evolve, evolve_observed, invariance_audit, soliton_orbit_check, InvarianceAudit, RunRecord, StepperConfig,
    Verdict,
};
use fhartree::experiment::{cmd_sweep, random_smooth_field, RunConfig};
use fhartree::functionals::{gn_ratio, hartree_energy, hs_seminorm_sq, invariant_pair, mass, Membership};
use fhartree::ground_state::{solve_ground_state_with, GroundState, SolverOptions};
use fhartree::spectral::{
    fractional_laplacian, hartree_potential, make_grid, sobolev_norm, KernelCorrection, MultiplierSet, SpectralField,
};
use fhartree::PhysParams;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn state(n: usize, len: f64) -> (MultiplierSet, GroundState) {
    let p = PhysParams::canonical();
    let mult = MultiplierSet::new(&make_grid(2, n, len).unwrap(), &p).unwrap();
    let gs = solve_ground_state_with(&mult, None, &SolverOptions::default()).unwrap();
    (mult, gs)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn random_fields(grid: &fhartree::spectral::GridSpec, count: usize) -> Vec<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240917);
    (0..count).map(|_| random_smooth_field(grid, &mut rng)).collect()
}

fn ground_state_validity(mult: &MultiplierSet, gs: &GroundState, seconds: f64) -> Outcome {
    let p = mult.params();
    let (s, g) = (p.s(), p.gamma());
    let r = &gs.report;
    let a = hs_seminorm_sq(&gs.q, mult);
    let b = mass(&gs.q);
    let v = hartree_energy(&gs.q, mult);
    let chain_a = rel(4.0 * s / g * a, v);
    let chain_b = rel(4.0 * s / (4.0 * s - g) * b, v);
    let passed = r.el_residual < 1e-8
        && r.pohozaev_r1.abs() < 1e-5
        && r.pohozaev_r2.abs() < 1e-5
        && chain_a < 1e-5
        && chain_b < 1e-5
        && seconds < 60.0;
    outcome(
        passed,
        format!(
            "EL {:.2e} (<1e-8), r1 {:.2e}, r2 {:.2e} (<1e-5), chain {:.2e}/{:.2e} (<1e-5), solve {:.1}s (<60s)",
            r.el_residual, r.pohozaev_r1, r.pohozaev_r2, chain_a, chain_b, seconds
        ),
    )
}

fn sharp_constant(mult: &MultiplierSet, gs: &GroundState, canonical: &MultiplierSet) -> Outcome {
    let p = mult.params();
    let (s, g) = (p.s(), p.gamma());
    let l2 = mass(&gs.q).sqrt();
    let hs = hs_seminorm_sq(&gs.q, mult).sqrt();
    let by_norms = (4.0 * s / g) / (l2.powf((4.0 * s - g) / s) * hs.powf((g - 2.0 * s) / s));
    let by_mass = ((4.0 * s - g) / g).powf(g / (2.0 * s)) * 4.0 * s / ((4.0 * s - g) * l2 * l2);
    let two_ways = rel(by_norms, by_mass);
    let at_q = (gn_ratio(&gs.q, mult, by_norms).unwrap() - 1.0).abs();
    let worst = random_fields(canonical.grid(), 100)
        .iter()
        .map(|f| gn_ratio(f, canonical, by_norms).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    outcome(
        two_ways < 1e-4 && at_q < 1e-5 && worst <= 1.0 + 1e-4,
        format!("C_GN two ways {two_ways:.2e} (<1e-4), |gn(Q)-1| {at_q:.2e} (<1e-5), max gn on 100 fields {worst:.4} (<=1+1e-4)"),
    )
}

fn threshold_closed_forms(mult: &MultiplierSet, gs: &GroundState) -> Outcome {
    let p = mult.params();
    let (s, g, sc) = (p.s(), p.gamma(), p.s_c());
    let pair = invariant_pair(&gs.q, p, mult).unwrap();
    let power = mass(&gs.q).powf(s / sc);
    let me_closed = (g - 2.0 * s) / (2.0 * (4.0 * s - g)) * power;
    let grad_closed = g / (4.0 * s - g) * power;
    let ratio_closed = 2.0 * g / (g - 2.0 * s);
    let (e_me, e_grad, e_ratio) = (rel(pair.me, me_closed), rel(pair.grad, grad_closed), rel(pair.grad / pair.me, ratio_closed));
    outcome(
        e_me < 1e-5 && e_grad < 1e-5 && e_ratio < 1e-5,
        format!("me_Q {e_me:.2e}, grad_Q {e_grad:.2e}, grad/me {e_ratio:.2e} (all <1e-5)"),
    )
}

fn conservation(records: &[RunRecord]) -> Outcome {
    let drifts: Vec<f64> = records.iter().map(|r| r.energy_drift()).collect();
    let fine = &records[2];
    let orders = [(drifts[0] / drifts[1]).log2(), (drifts[1] / drifts[2]).log2()];
    let passed = fine.mass_drift() < 1e-10
        && fine.energy_drift() < 1e-6
        && orders.iter().all(|o| (1.8..=2.2).contains(o));
    outcome(
        passed,
        format!(
            "mass drift {:.2e} (<1e-10), energy drift {:.2e} (<1e-6) at dt=1e-3, orders {:.3}, {:.3} (in [1.8, 2.2])",
            fine.mass_drift(),
            fine.energy_drift(),
            orders[0],
            orders[1]
        ),
    )
}

fn soliton(mult: &MultiplierSet, gs: &GroundState) -> Outcome {
    let coarse = soliton_orbit_check(gs, mult, 1.0, 1e-3).unwrap();
    let fine = soliton_orbit_check(gs, mult, 1.0, 5e-4).unwrap();
    let ratio = coarse / fine;
    outcome(
        coarse < 1e-4 && (3.5..=4.5).contains(&ratio),
        format!("max deviation {coarse:.2e} at dt=1e-3 (<1e-4), {fine:.2e} at dt=5e-4, ratio {ratio:.2} (about 4)"),
    )
}

fn membership_everywhere(rec: &RunRecord, m: Membership) -> bool {
    rec.membership_series.iter().all(|x| *x == m)
}

fn dichotomy(below: &RunRecord, above: &RunRecord) -> Outcome {
    let v_ratio = below.v_series.last().unwrap() / below.v_series[0];
    let below_ok = below.verdict() == Verdict::GlobalDispersing && v_ratio < 0.5 && membership_everywhere(below, Membership::K1);
    let growth = above.hs_series.last().unwrap() / above.hs_series[0];
    let above_ok = matches!(above.verdict(), Verdict::BlowUp { t_star, .. } if t_star.is_finite())
        && growth >= 10.0
        && membership_everywhere(above, Membership::K2);

    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::canonical();
    cfg.io.out_dir = dir.path().to_path_buf();
    let sweep = cmd_sweep(&cfg).unwrap();
    let judged: Vec<_> = sweep.rows.iter().filter(|r| (r.c - 1.0).abs() >= 0.05).collect();
    let sweep_ok = !judged.is_empty() && judged.iter().all(|r| r.agreement == Some(true));
    let rows: Vec<String> = sweep.rows.iter().map(|r| format!("{}:{}", r.c, r.outcome)).collect();
    outcome(
        below_ok && above_ok && sweep_ok,
        format!(
            "0.95Q {} with V ratio {v_ratio:.3} (<0.5); 1.05Q {} with Hs growth {growth:.1}x; sweep [{}]",
            below.verdict(),
            above.verdict(),
            rows.join(", ")
        ),
    )
}

fn flow_invariance(audits: &[InvarianceAudit]) -> Outcome {
    let flips: usize = audits.iter().filter(|a| a.initial_me_ratio < 1.0).map(|a| a.flips.len()).sum();
    let k1: Vec<_> = audits.iter().filter(|a| a.initial == Membership::K1).collect();
    let lower = k1.iter().map(|a| a.min_lower_margin).fold(f64::INFINITY, f64::min);
    let upper = k1.iter().map(|a| a.min_upper_margin).fold(f64::INFINITY, f64::min);
    let gap = k1.iter().map(|a| a.min_gap_ratio).fold(f64::INFINITY, f64::min);
    outcome(
        flips == 0 && !k1.is_empty() && lower >= 0.0 && upper >= 0.0 && gap > 0.0,
        format!(
            "{} runs, {flips} flips; K1 comparability margins {lower:.3e}/{upper:.3e} (>=0), coercivity gap {gap:.3e} (>0)",
            audits.len()
        ),
    )
}

fn balakrishnan(mult: &MultiplierSet) -> Outcome {
    let p = mult.params();
    let grid = mult.grid();
    let quad = QuadratureRule::default();
    let gaussian = SpectralField::gaussian(grid, 1.0, 1.0);
    let e_gauss = balakrishnan_check(&gaussian, p, &quad).rel_err;
    let e_random = random_fields(grid, 10)
        .iter()
        .map(|f| balakrishnan_check(f, p, &quad).rel_err)
        .fold(0.0, f64::max);
    // refinement: each doubling at least halves the error until it reaches rounding level
    let floor = 1e-12;
    let errors: Vec<f64> = [25, 50, 100, 200, 400]
        .iter()
        .map(|&n| balakrishnan_check(&gaussian, p, &quad.with_nodes(n).unwrap()).rel_err)
        .collect();
    let refines = errors.windows(2).all(|w| w[1] <= (0.5 * w[0]).max(floor));
    let seq: Vec<String> = errors.iter().map(|e| format!("{e:.1e}")).collect();
    outcome(
        e_gauss < 1e-4 && e_random < 1e-4 && refines,
        format!(
            "Gaussian {e_gauss:.2e}, worst of 10 random {e_random:.2e} (<1e-4); nodes 25..400: {}",
            seq.join(" ")
        ),
    )
}

fn virial(mult: &MultiplierSet, gs: &GroundState, canonical: &MultiplierSet) -> Outcome {
    let p = *mult.params();
    let quad = QuadratureRule::default();
    let phi = CutoffPhi::default_for(mult.grid()).unwrap();
    let mut worst: f64 = 0.0;
    let mut min_total = f64::INFINITY;
    let mut observer = |_: f64, u: &SpectralField| {
        let v = virial_rhs(u, &phi, &p, mult, &quad).unwrap();
        let fd = virial_rate_fd(u, mult, &phi, 1e-4).unwrap();
        let allowance = (1e-3 * v.total().abs()).max(v.a_r);
        worst = worst.max((fd - v.total()).abs() / allowance);
        min_total = min_total.min(v.total());
        Vec::new()
    };
    let cfg = StepperConfig { record_every: 100, ..StepperConfig::fixed_step(1e-3, 1.0) };
    let (rec, _) = evolve_observed(&gs.q.scaled_real(0.95), mult, &cfg, gs, Some(&mut observer)).unwrap();
    let k1 = membership_everywhere(&rec, Membership::K1);

    let grid = canonical.grid();
    let mut fields = random_fields(grid, 100);
    for w in [1.0, 2.5, 5.0] {
        fields.push(SpectralField::radial(grid, |r| (1.0 - (r / w).powi(2)).max(0.0).powi(4)));
    }
    let worst_p = fields.iter().map(|f| weighted_virial(f, &p).unwrap()).fold(f64::INFINITY, f64::min);
    outcome(
        worst <= 1.0 && k1 && min_total > 0.0 && worst_p >= 0.0,
        format!(
            "FD gap / allowance {worst:.3} (<=1) over {} samples; min main+I {min_total:.4} (>0); min weighted virial {worst_p:.3e} (>=0)",
            rec.len()
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let p = PhysParams::canonical();
    let g = make_grid(2, 32, 8.0).unwrap();
    let u = lumpy_field(&g);
    let density = u.density();
    let mut worst_pot: f64 = 0.0;
    let mut worst_v: f64 = 0.0;
    for correction in [KernelCorrection::CellAverage, KernelCorrection::LatticeCorrected] {
        let mult = MultiplierSet::with_correction(&g, &p, correction).unwrap();
        let direct = direct_convolution(&g, &oracle_kernel(&g, p.gamma(), correction), &density);
        let fast: Vec<f64> = hartree_potential(&u, &mult).unwrap().values().iter().map(|z| z.re).collect();
        worst_pot = worst_pot.max(max_rel(&fast, &direct));
        let v_direct: f64 = direct.iter().zip(&density).map(|(a, b)| a * b).sum::<f64>() * g.cell_volume();
        worst_v = worst_v.max(rel(hartree_energy(&u, &mult), v_direct));
    }

    let w = 0.5;
    let big = make_grid(2, 1024, 128.0).unwrap();
    let gauss = SpectralField::gaussian(&big, 1.0, w);
    let n = big.n();
    let mut worst_lap: f64 = 0.0;
    for alpha in [0.35, 0.7, 1.3] {
        let lap = fractional_laplacian(&gauss, alpha).unwrap();
        let peak = gaussian_frac_lap(w, alpha, 0.0).abs();
        for steps in [0usize, 2, 5] {
            let r = steps as f64 * big.spacing();
            let got = lap.values()[(n / 2 + steps) * n + n / 2];
            worst_lap = worst_lap.max((got - Complex64::new(gaussian_frac_lap(w, alpha, r), 0.0)).norm() / peak);
        }
    }
    let mut worst_norm: f64 = 0.0;
    for alpha in [0.0, 0.5, 0.7, 1.0] {
        worst_norm = worst_norm.max(rel(sobolev_norm(&gauss, alpha).powi(2), gaussian_sobolev_sq(w, alpha)));
    }
    outcome(
        worst_pot < 1e-9 && worst_v < 1e-9 && worst_lap < 1e-6 && worst_norm < 1e-6,
        format!(
            "potential {worst_pot:.2e}, V {worst_v:.2e} (<1e-9); fractional Laplacian {worst_lap:.2e}, Sobolev norms {worst_norm:.2e} (<1e-6)"
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |id: usize, name: &'static str, o: Outcome| {
        println!("{}  criterion {id:>2}  {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };

    let (canon_mult, canon_gs) = state(128, 32.0);

    let start = Instant::now();
    let (id_mult, id_gs) = state(1024, 128.0);
    let solve_time = start.elapsed().as_secs_f64();
    report(1, "ground-state validity", ground_state_validity(&id_mult, &id_gs, solve_time));
    report(2, "sharp-constant consistency", sharp_constant(&id_mult, &id_gs, &canon_mult));
    drop((id_mult, id_gs));

    let (th_mult, th_gs) = state(2048, 256.0);
    report(3, "threshold closed forms", threshold_closed_forms(&th_mult, &th_gs));
    drop((th_mult, th_gs));

    let p = PhysParams::canonical();
    let below = canon_gs.q.scaled_real(0.95);
    let fixed: Vec<RunRecord> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| evolve(&below, &canon_mult, &StepperConfig::fixed_step(dt, 1.0), &canon_gs).unwrap())
        .collect();
    report(4, "conservation", conservation(&fixed));
    report(5, "soliton orbit", soliton(&canon_mult, &canon_gs));

    let below_run = evolve(&below, &canon_mult, &StepperConfig::default(), &canon_gs).unwrap();
    let (fine_mult, fine_gs) = state(256, 16.0);
    let above_cfg = StepperConfig { t_end: Some(3.0), ..StepperConfig::default() };
    let above_run = evolve(&fine_gs.q.scaled_real(1.05), &fine_mult, &above_cfg, &fine_gs).unwrap();
    report(6, "dichotomy end to end", dichotomy(&below_run, &above_run));

    let audits: Vec<InvarianceAudit> = [&fixed[2], &below_run, &above_run]
        .iter()
        .map(|r| invariance_audit(r, &p).unwrap())
        .collect();
    report(7, "invariant-set flow invariance", flow_invariance(&audits));

    report(8, "Balakrishnan identity", balakrishnan(&canon_mult));

    let (vir_mult, vir_gs) = state(256, 32.0);
    report(9, "virial consistency", virial(&vir_mult, &vir_gs, &canon_mult));

    report(10, "oracle equivalence", oracle_equivalence());

    let failed: Vec<usize> = results.iter().filter(|(_, _, o)| !o.passed).map(|(id, _, _)| *id).collect();
    if failed.is_empty() {
        println!("all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
