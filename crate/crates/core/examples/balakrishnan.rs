//! Checks the resolvent representation of the H^s seminorm on a Gaussian
//! and shows how the error falls as quadrature nodes are added.
//!
//! Usage: `cargo run --release --example balakrishnan -- [s]`

use fhartree::diagnostics::{balakrishnan_check, QuadratureRule};
use fhartree::spectral::{make_grid, SpectralField};
use fhartree::PhysParams;

fn main() -> fhartree::Result<()> {
    let s = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.7);
    let p = PhysParams::new(2, s, 1.6_f64.max(2.0 * s + 0.2))?;
    let grid = make_grid(2, 128, 32.0)?;
    let u = SpectralField::gaussian(&grid, 1.0, 1.0);

    println!("s = {s}, gamma = {}", p.gamma());
    println!("{:>6} {:>20} {:>20} {:>11} {:>11}", "nodes", "lhs", "s |u|^2_Hs", "closed", "truncated");
    for nodes in [20, 50, 100, 200, 400] {
        let closed = QuadratureRule::new(nodes, 1e-6, 1e6, true)?;
        let open = QuadratureRule::new(nodes, 1e-6, 1e6, false)?;
        let a = balakrishnan_check(&u, &p, &closed);
        let b = balakrishnan_check(&u, &p, &open);
        println!("{nodes:>6} {:>20.14} {:>20.14} {:>11.2e} {:>11.2e}", a.lhs, a.rhs, a.rel_err, b.rel_err);
    }
    Ok(())
}
