//! Runs the amplitude sweep and writes sweep.csv and sweep.json.
//!
//! Usage: `cargo run --release --example sweep -- [out_dir] [KEY=VALUE ...]`

use fhartree::experiment::{cmd_sweep, RunConfig};

fn main() -> fhartree::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = RunConfig::canonical();
    cfg.io.out_dir = args.next().unwrap_or_else(|| "out/sweep".into()).into();
    for kv in args {
        cfg.apply_override(&kv)?;
    }
    let outcome = cmd_sweep(&cfg)?;
    println!("{:>6} {:>10} {:>10} {:>4}  {:<28} {:<26} agree", "c", "me_ratio", "grad", "set", "prediction", "outcome");
    for r in &outcome.rows {
        let agree = match r.agreement {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "-",
        };
        let prediction = r.prediction.to_string();
        println!(
            "{:>6.3} {:>10.4} {:>10.4} {:>4}  {:<28} {:<26} {agree}",
            r.c,
            r.me_ratio,
            r.grad_ratio,
            r.membership.to_string(),
            prediction.chars().take(28).collect::<String>(),
            r.outcome.to_string()
        );
    }
    println!("written to {}", cfg.io.out_dir.display());
    Ok(())
}
