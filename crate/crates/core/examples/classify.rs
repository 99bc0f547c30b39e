//! Places a few initial profiles relative to the ground-state threshold.
//!
//! Usage: `cargo run --release --example classify`

use fhartree::experiment::{boosted, classify};
use fhartree::ground_state::{solve_ground_state_with, SolverOptions};
use fhartree::spectral::{make_grid, MultiplierSet, SpectralField};
use fhartree::PhysParams;

fn main() -> fhartree::Result<()> {
    let p = PhysParams::canonical();
    let mult = MultiplierSet::new(&make_grid(2, 128, 32.0)?, &p)?;
    let gs = solve_ground_state_with(&mult, None, &SolverOptions::default())?;
    let grid = mult.grid();

    let profiles: Vec<(&str, SpectralField)> = vec![
        ("0.8 Q", gs.q.scaled_real(0.8)),
        ("0.95 Q", gs.q.scaled_real(0.95)),
        ("Q", gs.q.clone()),
        ("1.05 Q", gs.q.scaled_real(1.05)),
        ("1.5 Q", gs.q.scaled_real(1.5)),
        ("Q e^{0.8 i x1}", boosted(&gs.q, &[0.8, 0.0])),
        ("gaussian 0.5", SpectralField::gaussian(grid, 0.5, 1.0)),
        ("gaussian 2.0", SpectralField::gaussian(grid, 2.0, 1.0)),
    ];
    println!("{:<16} {:>12} {:>12} {:>9}  prediction", "profile", "me_ratio", "grad_ratio", "set");
    for (name, u) in profiles {
        let c = classify(&u, &gs, &mult)?;
        println!("{name:<16} {:>12.5} {:>12.5} {:>9}  {}", c.me_ratio, c.grad_ratio, c.membership.to_string(), c.prediction);
    }
    Ok(())
}
