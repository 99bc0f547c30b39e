//! Computes Q at the canonical parameters and prints its validation report.
//!
//! Usage: `cargo run --release --example ground_state -- [n] [L]`

use fhartree::ground_state::{solve_ground_state, SolverOptions};
use fhartree::spectral::make_grid;
use fhartree::PhysParams;

fn main() -> fhartree::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(128);
    let len = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(32.0);
    let p = PhysParams::canonical();
    let grid = make_grid(2, n, len)?;
    let start = std::time::Instant::now();
    let gs = solve_ground_state(&p, &grid, None, &SolverOptions::default())?;
    let r = &gs.report;
    println!("grid {n}^2 on L = {len}, {} iterations in {:.2?}", r.iterations, start.elapsed());
    println!("|Q|_2 = {:.12}  |Q|_Hs = {:.12}  V(Q) = {:.12}  E[Q] = {:.12}", r.l2, r.hs, r.potential, r.energy);
    println!("Euler-Lagrange residual  {:.3e}", r.el_residual);
    println!("Pohozaev r1, r2          {:.3e}, {:.3e}", r.pohozaev_r1, r.pohozaev_r2);
    println!("V chain residuals        {:.3e}, {:.3e}", r.chain_hs, r.chain_l2);
    println!("C_GN two ways            {:.12} {:.12} (rel {:.2e})", r.cgn_a, r.cgn_b, (r.cgn_a - r.cgn_b).abs() / r.cgn_a);
    println!("me_Q direct/closed       {:.12} {:.12}", r.me_q, r.me_q_closed);
    println!("grad_Q direct/closed     {:.12} {:.12}", r.grad_q, r.grad_q_closed);
    println!("edge/peak {:.2e}, radial spread {:.2e}", r.tail_ratio, r.radial_deviation);
    Ok(())
}
