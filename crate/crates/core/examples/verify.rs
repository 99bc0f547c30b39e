//! Runs the identity suite on a small configuration and prints each check.
//!
//! The default configuration uses the large validation grids; this example
//! shrinks them so it finishes in seconds. On the small grids the ground-state
//! identities sit near 1e-4 and fail their 1e-5 tolerances. Pass `full` for
//! the real suite (a few minutes).
//!
//! Usage: `cargo run --release --example verify -- [full]`

use fhartree::experiment::{cmd_verify, RunConfig};

fn main() -> fhartree::Result<()> {
    let full = std::env::args().nth(1).as_deref() == Some("full");
    let mut cfg = RunConfig::canonical();
    cfg.io.out_dir = "out/verify".into();
    if !full {
        for kv in [
            "grid.n=64",
            "grid.len=16",
            "verify.identity_grid.n=128",
            "verify.identity_grid.len=32",
            "verify.random_fields=20",
        ] {
            cfg.apply_override(kv)?;
        }
        cfg.verify.threshold_grid = None;
        cfg.verify.virial_grid = None;
    }
    let report = cmd_verify(&cfg)?;
    for check in &report.checks {
        println!("{check}");
    }
    println!("{}", if report.passed { "all checks passed" } else { "some checks failed" });
    Ok(())
}
