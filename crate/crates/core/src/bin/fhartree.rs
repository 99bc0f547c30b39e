use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fhartree::experiment::{
    cmd_classify, cmd_evolve, cmd_ground_state, cmd_sweep, cmd_verify, exit_code, Experiment, RunConfig,
    EXIT_VERIFICATION,
};

#[derive(Parser)]
#[command(version, about = "Ground states, dynamics and identity checks for the focusing fractional Hartree equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (same as io.out_dir=...).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Built-in parameter profile used when no config file is given.
    #[arg(long, global = true, default_value = "canonical")]
    profile: String,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for Q and write its snapshot and validation report.
    GroundState(Overrides),
    /// Evolve the configured initial data with full diagnostics.
    Evolve(Overrides),
    /// Place the initial data relative to the threshold and predict its fate.
    Classify(Overrides),
    /// Classify and evolve c·Q over a range of amplitudes.
    Sweep(Overrides),
    /// Run the identity suite; exits with 3 on any failure.
    Verify(Overrides),
}

#[derive(clap::Args)]
struct Overrides {
    /// Dotted overrides such as physics.s=0.6 or stepper.t_end=0.5.
    #[arg(value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn run(cli: Cli) -> fhartree::Result<ExitCode> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::profile(&cli.profile)?,
    };
    let (kind, overrides) = match &cli.command {
        Command::GroundState(o) => (Experiment::GroundState, o),
        Command::Evolve(o) => (Experiment::Evolve, o),
        Command::Classify(o) => (Experiment::Classify, o),
        Command::Sweep(o) => (Experiment::Sweep, o),
        Command::Verify(o) => (Experiment::Verify, o),
    };
    for kv in &overrides.set {
        cfg.apply_override(kv)?;
    }
    if let Some(out) = cli.out {
        cfg.io.out_dir = out;
    }
    cfg.experiment = Some(kind);
    match kind {
        Experiment::GroundState => {
            let o = cmd_ground_state(&cfg)?;
            let r = &o.report;
            println!("converged in {} iterations; Pohozaev r1 {:.2e}, r2 {:.2e}", r.iterations, r.pohozaev_r1, r.pohozaev_r2);
            println!("C_GN {:.10} / {:.10}; me_Q {:.6e}; grad_Q {:.6e}", r.cgn_a, r.cgn_b, r.me_q, r.grad_q);
        }
        Experiment::Classify => {
            let c = cmd_classify(&cfg)?;
            println!("me_ratio {:.6}  grad_ratio {:.6}  {}  -> {}", c.me_ratio, c.grad_ratio, c.membership, c.prediction);
        }
        Experiment::Evolve => {
            let (o, rec) = cmd_evolve(&cfg)?;
            println!("{} samples, {} steps, t = {:.4}", rec.len(), rec.steps, o.summary.final_time);
            println!("{}", o.comparison_line());
        }
        Experiment::Sweep => {
            let o = cmd_sweep(&cfg)?;
            for r in &o.rows {
                println!("c = {:<6} {:<8} {:<44} {}", r.c, r.membership.to_string(), r.prediction.to_string(), r.outcome);
            }
            if !o.all_agree {
                println!("some predictions disagree with the outcomes");
                return Ok(ExitCode::from(EXIT_VERIFICATION as u8));
            }
        }
        Experiment::Verify => {
            let report = cmd_verify(&cfg)?;
            for c in &report.checks {
                println!("{c}");
            }
            if !report.passed {
                return Ok(ExitCode::from(EXIT_VERIFICATION as u8));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
