use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{GridSection, Profile, RunConfig};
use super::fields::boosted;
use crate::diagnostics::{
    quadratic_fit, scattering_proxies, virial_lower_bound_audit, virial_observer, virial_series, weighted_virial,
    CutoffPhi, QuadratureRule, ScatteringProxies, VirialAudit,
};
use crate::error::{Error, Result};
use crate::evolution::{
    evolve, evolve_observed, invariance_audit, write_csv, write_summary, InvarianceAudit, RunRecord, RunSummary,
    StepperConfig, Verdict,
};
use crate::functionals::{classify_membership, invariant_pair, InvariantPair, Membership};
use crate::ground_state::{
    load_snapshot, radial_deviation, save_snapshot, solve_ground_state_with, thresholds, GroundState,
    GroundStateReport, IterationInfo, Thresholds, CONVENTION_TAG,
};
use crate::params::PhysParams;
use crate::spectral::{make_grid, GridSpec, MultiplierSet, SpectralField};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonConvergence { .. } | Error::CollapseToZero { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_VALIDATION,
    }
}

pub fn convention() -> &'static str {
    std::str::from_utf8(CONVENTION_TAG).expect("ascii tag")
}

/// Wrapper that makes every JSON artifact self-describing.
#[derive(Debug, Serialize)]
pub struct Artifact<'a, T: Serialize> {
    pub convention: &'static str,
    pub config: &'a RunConfig,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn write_artifact<T: Serialize>(cfg: &RunConfig, name: &str, body: &T) -> Result<PathBuf> {
    let path = cfg.io.out_dir.join(name);
    write_summary(&Artifact { convention: convention(), config: cfg, body }, &path)?;
    Ok(path)
}

/// What the dichotomy predicts for `u0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prediction {
    GlobalScattering,
    /// Global, but `s < N/(2N−1)` leaves scattering open.
    Global,
    BlowUp,
    Threshold,
    OutsideHypotheses,
}

impl std::fmt::Display for Prediction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Prediction::GlobalScattering => "global + scattering",
            Prediction::Global => "global (scattering not covered for this s)",
            Prediction::BlowUp => "finite-time blow-up",
            Prediction::Threshold => "threshold case, no dichotomy prediction",
            Prediction::OutsideHypotheses => "outside theorem hypotheses, no prediction",
        })
    }
}

impl Prediction {
    /// Whether a verdict confirms the prediction; `None` when nothing was predicted.
    pub fn agrees_with(&self, verdict: &Verdict) -> Option<bool> {
        match self {
            Prediction::GlobalScattering | Prediction::Global => Some(*verdict == Verdict::GlobalDispersing),
            Prediction::BlowUp => Some(matches!(verdict, Verdict::BlowUp { .. })),
            Prediction::Threshold | Prediction::OutsideHypotheses => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub pair: InvariantPair,
    pub me_ratio: f64,
    pub grad_ratio: f64,
    pub membership: Membership,
    pub radial_deviation: f64,
    pub prediction: Prediction,
}

pub fn classify(u0: &SpectralField, gs: &GroundState, mult: &MultiplierSet) -> Result<Classification> {
    let p = *mult.params();
    let pair = invariant_pair(u0, &p, mult)?;
    let member = classify_membership(&pair, gs);
    let radial = radial_deviation(u0);
    let prediction = match member.verdict {
        _ if radial > 1e-3 => Prediction::OutsideHypotheses,
        Membership::Neither => Prediction::OutsideHypotheses,
        Membership::Boundary => Prediction::Threshold,
        Membership::K1 if p.scattering_hypothesis_holds() => Prediction::GlobalScattering,
        Membership::K1 => Prediction::Global,
        Membership::K2 => Prediction::BlowUp,
    };
    Ok(Classification {
        pair,
        me_ratio: member.me_ratio,
        grad_ratio: member.grad_ratio,
        membership: member.verdict,
        radial_deviation: radial,
        prediction,
    })
}

/// Loads the configured snapshot or solves for `Q` on `mult`'s grid.
pub fn obtain_ground_state(cfg: &RunConfig, mult: &MultiplierSet) -> Result<GroundState> {
    match &cfg.io.ground_state {
        Some(path) => {
            let q = load_field(path, mult.params(), mult.grid())?;
            GroundState::from_profile(q, mult, IterationInfo::external())
        }
        None => solve_ground_state_with(mult, None, &cfg.solver),
    }
}

fn load_field(path: &Path, p: &PhysParams, grid: &GridSpec) -> Result<SpectralField> {
    let snap = load_snapshot(path)?;
    snap.check_params(p)?;
    if snap.field.grid() != grid {
        return Err(Error::Mismatch(format!(
            "snapshot {} holds n = {}, L = {} but the configuration asks for n = {}, L = {}",
            path.display(),
            snap.header.n,
            snap.header.len,
            grid.n(),
            grid.len()
        )));
    }
    Ok(snap.field)
}

pub fn initial_field(cfg: &RunConfig, gs: &GroundState) -> Result<SpectralField> {
    let grid = gs.grid();
    let init = &cfg.initial;
    let base = match (&init.snapshot, init.profile) {
        (Some(path), _) => load_field(path, &gs.params, grid)?,
        (None, Profile::GroundState) => gs.q.clone(),
        (None, Profile::Gaussian) => SpectralField::gaussian(grid, 1.0, init.width),
    };
    let u = base.scaled_real(init.amplitude);
    Ok(if init.boost.iter().any(|k| *k != 0.0) { boosted(&u, &init.boost) } else { u })
}

struct Setup {
    params: PhysParams,
    mult: MultiplierSet,
}

fn setup(cfg: &RunConfig) -> Result<Setup> {
    cfg.validate()?;
    let params = cfg.params()?;
    let mult = MultiplierSet::new(&cfg.grid_spec()?, &params)?;
    Ok(Setup { params, mult })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateOutcome {
    pub status: String,
    pub report: GroundStateReport,
    pub thresholds: Option<Thresholds>,
    pub snapshot: Option<PathBuf>,
}

/// Solves for `Q`, writes `q.fhs` with its sidecar and
/// `ground_state.json`. A configured snapshot is used as the seed.
pub fn cmd_ground_state(cfg: &RunConfig) -> Result<GroundStateOutcome> {
    let Setup { params, mult } = setup(cfg)?;
    let seed = match &cfg.io.ground_state {
        Some(path) => Some(load_field(path, &params, mult.grid())?),
        None => None,
    };
    let gs = match solve_ground_state_with(&mult, seed.as_ref(), &cfg.solver) {
        Ok(gs) => gs,
        Err(Error::NonConvergence { iterations, last_change, partial }) => {
            let outcome = GroundStateOutcome {
                status: "non-convergence".into(),
                report: partial.report.clone(),
                thresholds: None,
                snapshot: None,
            };
            write_artifact(cfg, "ground_state.json", &outcome)?;
            return Err(Error::NonConvergence { iterations, last_change, partial });
        }
        Err(e) => return Err(e),
    };
    let th = thresholds(&gs, &mult)?;
    let path = cfg.io.out_dir.join("q.fhs");
    let mut outcome = GroundStateOutcome {
        status: "converged".into(),
        report: gs.report.clone(),
        thresholds: Some(th),
        snapshot: Some(path.clone()),
    };
    save_snapshot(&path, &gs.q, &params, Some(&Artifact { convention: convention(), config: cfg, body: &outcome }))?;
    write_artifact(cfg, "ground_state.json", &outcome)?;
    outcome.snapshot = Some(path);
    Ok(outcome)
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Classification> {
    let Setup { mult, .. } = setup(cfg)?;
    let gs = obtain_ground_state(cfg, &mult)?;
    let u0 = initial_field(cfg, &gs)?;
    let c = classify(&u0, &gs, &mult)?;
    write_artifact(cfg, "classify.json", &c)?;
    Ok(c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvolveOutcome {
    pub classification: Classification,
    pub summary: RunSummary,
    pub invariance: InvarianceAudit,
    pub proxies: Option<ScatteringProxies>,
    pub virial: Option<VirialAudit>,
    /// Leading coefficient of a quadratic fit to the weighted virial.
    pub weighted_virial_curvature: Option<f64>,
    pub agreement: Option<bool>,
}

impl EvolveOutcome {
    pub fn comparison_line(&self) -> String {
        let verdict = self.summary.verdict;
        let tail = match self.agreement {
            Some(true) => "agree",
            Some(false) => "DISAGREE",
            None => "no comparison",
        };
        format!("prediction: {}; outcome: {verdict}; {tail}", self.classification.prediction)
    }
}

/// Full run with diagnostics: `run.csv`, `evolve.json` and optional snapshots.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<(EvolveOutcome, RunRecord)> {
    let Setup { params, mult } = setup(cfg)?;
    let gs = obtain_ground_state(cfg, &mult)?;
    let u0 = initial_field(cfg, &gs)?;
    let classification = classify(&u0, &gs, &mult)?;
    let phi = CutoffPhi::default_for(mult.grid())?;
    let quad = QuadratureRule::default();
    let mut virial = cfg.io.virial.then(|| virial_observer(&phi, &mult, &quad));
    let mut sample = 0usize;
    let mut snapshot_error = None;
    let mut observer = |t: f64, u: &SpectralField| {
        let mut out = vec![("weighted_virial".to_string(), weighted_virial(u, &params).unwrap_or(f64::NAN))];
        if let Some(v) = virial.as_mut() {
            out.extend(v(t, u));
        }
        if cfg.io.snapshot_every > 0 && sample % cfg.io.snapshot_every == 0 {
            let path = cfg.io.out_dir.join(format!("u_{sample:05}.fhs"));
            if let Err(e) = save_snapshot(&path, u, &params, Some(&serde_json::json!({ "t": t }))) {
                snapshot_error.get_or_insert(e);
            }
        }
        sample += 1;
        out
    };
    let (rec, _) = evolve_observed(&u0, &mult, &cfg.stepper, &gs, Some(&mut observer))?;
    if let Some(e) = snapshot_error {
        return Err(e);
    }
    let outcome = summarize_run(&rec, &classification, &params, &cfg.stepper, &gs, cfg.io.virial)?;
    write_csv(&rec, &cfg.io.out_dir.join("run.csv"))?;
    write_artifact(cfg, "evolve.json", &outcome)?;
    Ok((outcome, rec))
}

fn summarize_run(
    rec: &RunRecord,
    classification: &Classification,
    params: &PhysParams,
    stepper: &StepperConfig,
    gs: &GroundState,
    with_virial: bool,
) -> Result<EvolveOutcome> {
    let summary = RunSummary::new(rec, params, stepper);
    let proxies = (rec.len() >= 2).then(|| scattering_proxies(rec, params.q_c())).transpose()?;
    let virial = if with_virial { Some(virial_lower_bound_audit(rec, gs, &virial_series(rec)?)?) } else { None };
    let curvature = match rec.extra_column("weighted_virial") {
        Some(w) if w.len() >= 3 => Some(quadratic_fit(&rec.times, w)?[2]),
        _ => None,
    };
    Ok(EvolveOutcome {
        classification: classification.clone(),
        agreement: classification.prediction.agrees_with(&summary.verdict),
        summary,
        invariance: invariance_audit(rec, params)?,
        proxies,
        virial,
        weighted_virial_curvature: curvature,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub s: f64,
    pub gamma: f64,
    pub me_ratio: f64,
    pub grad_ratio: f64,
    pub membership: Membership,
    pub prediction: Prediction,
    pub outcome: Verdict,
    /// `None` for `|c − 1| < 0.05` or when nothing was predicted.
    pub agreement: Option<bool>,
    pub v_ratio: f64,
    pub membership_uniform: bool,
    pub n: usize,
    pub len: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub all_agree: bool,
}

pub const SWEEP_COLUMNS: [&str; 13] = [
    "c",
    "s",
    "gamma",
    "me_ratio",
    "grad_ratio",
    "membership",
    "prediction",
    "outcome",
    "agreement",
    "v_ratio",
    "membership_uniform",
    "n",
    "L",
];

/// Classifies and evolves `c·Q` for every amplitude and parameter pair,
/// writing `sweep.csv` in sweep order.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepOutcome> {
    let amplitudes = cfg.sweep.amplitudes()?;
    let base = setup(cfg)?.params;
    let mut param_sets = vec![base];
    for [s, gamma] in &cfg.sweep.params {
        param_sets.push(PhysParams::new(base.dim(), *s, *gamma)?);
    }
    let main = cfg.grid;
    let blow = cfg.sweep.blowup_grid.unwrap_or(main);
    // one ground state per (parameters, grid)
    let mut states = Vec::new();
    for p in &param_sets {
        let on_main = state_on(cfg, p, main, true)?;
        let on_blow = if blow == main { None } else { Some(state_on(cfg, p, blow, false)?) };
        states.push((on_main, on_blow));
    }
    let jobs: Vec<(usize, f64)> =
        (0..param_sets.len()).flat_map(|i| amplitudes.iter().map(move |c| (i, *c))).collect();
    let rows: Vec<Result<SweepRow>> = jobs
        .par_iter()
        .map(|&(i, c)| {
            let ((mult, gs), blow_state) = &states[i];
            let u0 = gs.q.scaled_real(c);
            let class = classify(&u0, gs, mult)?;
            let (run_mult, run_gs, stepper) = match (class.membership, blow_state) {
                (Membership::K2, Some((m, g))) => {
                    (m, g, StepperConfig { t_end: Some(cfg.sweep.blowup_t_end), ..cfg.stepper })
                }
                _ => (mult, gs, cfg.stepper),
            };
            let rec = evolve(&run_gs.q.scaled_real(c), run_mult, &stepper, run_gs)?;
            let outcome = rec.verdict();
            let claims = (c - 1.0).abs() >= 0.05;
            let last = rec.len() - 1;
            Ok(SweepRow {
                c,
                s: mult.params().s(),
                gamma: mult.params().gamma(),
                me_ratio: class.me_ratio,
                grad_ratio: class.grad_ratio,
                membership: class.membership,
                prediction: class.prediction,
                outcome,
                agreement: if claims { class.prediction.agrees_with(&outcome) } else { None },
                v_ratio: rec.v_series[last] / rec.v_series[0],
                membership_uniform: rec.membership_series.iter().all(|m| *m == rec.membership_series[0]),
                n: run_mult.grid().n(),
                len: run_mult.grid().len(),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    write_sweep_csv(&rows, &cfg.io.out_dir.join("sweep.csv"))?;
    let all_agree = rows.iter().all(|r| r.agreement != Some(false));
    let outcome = SweepOutcome { rows, all_agree };
    write_artifact(cfg, "sweep.json", &outcome)?;
    Ok(outcome)
}

fn state_on(cfg: &RunConfig, p: &PhysParams, grid: GridSection, allow_snapshot: bool) -> Result<(MultiplierSet, GroundState)> {
    let mult = MultiplierSet::new(&make_grid(p.dim(), grid.n, grid.len)?, p)?;
    let gs = if allow_snapshot && *p == cfg.params()? {
        obtain_ground_state(cfg, &mult)?
    } else {
        solve_ground_state_with(&mult, None, &cfg.solver)?
    };
    Ok((mult, gs))
}

fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(SWEEP_COLUMNS).map_err(io)?;
    for r in rows {
        let agreement = match r.agreement {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a",
        };
        w.write_record([
            r.c.to_string(),
            r.s.to_string(),
            r.gamma.to_string(),
            format!("{:.10e}", r.me_ratio),
            format!("{:.10e}", r.grad_ratio),
            r.membership.to_string(),
            r.prediction.to_string(),
            r.outcome.to_string(),
            agreement.to_string(),
            format!("{:.10e}", r.v_ratio),
            r.membership_uniform.to_string(),
            r.n.to_string(),
            r.len.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
