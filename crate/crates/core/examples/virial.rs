//! Tracks the localized virial along a sub-threshold run and compares its
//! finite-difference rate with the computed right-hand side.
//!
//! Usage: `cargo run --release --example virial -- [c] [n]`

use fhartree::diagnostics::{localized_virial, virial_rate_fd, virial_rhs, weighted_virial, CutoffPhi, QuadratureRule};
use fhartree::evolution::{evolve_observed, StepperConfig};
use fhartree::ground_state::{solve_ground_state_with, SolverOptions};
use fhartree::spectral::{make_grid, MultiplierSet, SpectralField};
use fhartree::PhysParams;

fn main() -> fhartree::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let c: f64 = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(0.95);
    let n: usize = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(256);
    let p = PhysParams::canonical();
    let mult = MultiplierSet::new(&make_grid(2, n, 32.0)?, &p)?;
    let gs = solve_ground_state_with(&mult, None, &SolverOptions::default())?;
    let phi = CutoffPhi::default_for(mult.grid())?;
    let quad = QuadratureRule::default();

    println!("{:>6} {:>11} {:>11} {:>11} {:>11} {:>10} {:>11}", "t", "M_R", "dM_R/dt", "main", "I", "A_R", "P");
    let mut observer = |t: f64, u: &SpectralField| {
        let v = virial_rhs(u, &phi, &p, &mult, &quad).expect("virial terms");
        let fd = virial_rate_fd(u, &mult, &phi, 1e-4).expect("finite difference");
        let m_r = localized_virial(u, &phi).expect("virial");
        let w = weighted_virial(u, &p).expect("weighted virial");
        println!("{t:>6.3} {m_r:>11.5} {fd:>11.5} {:>11.5} {:>11.5} {:>10.2e} {w:>11.5}", v.main, v.interaction, v.a_r);
        Vec::new()
    };
    let cfg = StepperConfig { record_every: 100, ..StepperConfig::fixed_step(1e-3, 1.0) };
    let (rec, _) = evolve_observed(&gs.q.scaled_real(c), &mult, &cfg, &gs, Some(&mut observer))?;
    println!("{} samples, outcome {}", rec.len(), rec.verdict());
    Ok(())
}
