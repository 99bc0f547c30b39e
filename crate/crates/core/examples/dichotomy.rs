//! Evolves c·Q just below and just above the threshold and prints the
//! outcome of each run.
//!
//! Usage: `cargo run --release --example dichotomy -- [c_below] [c_above]`

use fhartree::evolution::{evolve, invariance_audit, StepperConfig};
use fhartree::ground_state::{solve_ground_state_with, SolverOptions};
use fhartree::spectral::{make_grid, MultiplierSet};
use fhartree::PhysParams;

fn main() -> fhartree::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let below = args.first().copied().unwrap_or(0.95);
    let above = args.get(1).copied().unwrap_or(1.05);
    let p = PhysParams::canonical();

    // (c, n, L, horizon): blow-up needs a finer grid and a longer horizon
    for (c, n, len, t_end) in [(below, 128, 32.0, None), (above, 256, 16.0, Some(3.0))] {
        let mult = MultiplierSet::new(&make_grid(2, n, len)?, &p)?;
        let gs = solve_ground_state_with(&mult, None, &SolverOptions::default())?;
        let cfg = StepperConfig { t_end, ..StepperConfig::default() };
        let rec = evolve(&gs.q.scaled_real(c), &mult, &cfg, &gs)?;
        let audit = invariance_audit(&rec, &p)?;
        let last = rec.len() - 1;
        println!("c = {c} on {n}^2, L = {len}");
        println!("  start in {} (me_ratio {:.4}, grad_ratio {:.4})", audit.initial, rec.me_ratio_series[0], rec.grad_ratio_series[0]);
        println!("  outcome {} after {} steps, t = {:.3}", rec.verdict(), rec.steps, rec.times[last]);
        println!(
            "  V(t)/V(0) = {:.3}, |D^s u|^2 grew {:.1}x, membership uniform: {}",
            rec.v_series[last] / rec.v_series[0],
            rec.hs_series[last] / rec.hs_series[0],
            audit.uniform
        );
        println!("  mass drift {:.1e}, energy drift {:.1e}", rec.mass_drift(), rec.energy_drift());
    }
    Ok(())
}
