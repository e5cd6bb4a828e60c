//! `frameq`: experiment runner for frame quantization.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 a result broke
//! the contract it was checked against.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::ContractFailure;
use config::{Format, GlobalFlags};

#[derive(Parser)]
#[command(name = "frameq", version, about = "Quantization experiments on finite frames")]
struct Cli {
    /// JSON config file with global keys and command parameters; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random choice. Falls back to the config file, then
    /// FRAMEQ_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a frame and write it as JSON.
    BuildFrame(commands::BuildFrameArgs),
    /// Quantize one vector on a saved frame.
    Quantize(commands::QuantizeArgs),
    /// Measure how densely a point set covers the unit ball.
    Density(commands::DensityArgs),
    /// Sampling test of bounded-coefficient quantization across dimensions.
    Sweep(commands::SweepArgs),
    /// Σ-Δ quantization of a bandlimited signal and its reconstruction.
    SigmaDelta(commands::SigmaDeltaArgs),
    /// Evaluate the closed-form bounds.
    BoundEval(commands::BoundEvalArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = GlobalFlags { config: cli.config, seed: cli.seed, output_dir: cli.output_dir, format: cli.format };
    match cli.command {
        Command::BuildFrame(a) => commands::build_frame(&g, a),
        Command::Quantize(a) => commands::quantize(&g, a),
        Command::Density(a) => commands::density(&g, a),
        Command::Sweep(a) => commands::sweep(&g, a),
        Command::SigmaDelta(a) => commands::sigma_delta(&g, a),
        Command::BoundEval(a) => commands::bound_eval(&g, a),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ContractFailure>().is_some() {
        return 3;
    }
    match e.downcast_ref::<frameq::Error>() {
        Some(frameq::Error::ContractViolation(_) | frameq::Error::NonConvergence { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
