use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use trigsym::sdp::SolverConfig;
use trigsym_cli::{render, run, Format, RunMode, RunRequest};

/// Lower bounds for Weyl-group-invariant trigonometric polynomials.
#[derive(Debug, Parser)]
#[command(name = "trigsym", version)]
struct Args {
    /// Polynomial in JSON: {"root_system": "A2", "terms": [{"weight": [1,0], "re": 4.0}]}
    #[arg(long)]
    input: PathBuf,
    /// Relaxation order (default: the smallest order that fits the input).
    #[arg(long)]
    degree: Option<usize>,
    /// Comma separated subset of dense, invariant, block, oracle, sizes.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "dense,invariant,block,oracle,sizes"
    )]
    modes: Vec<RunMode>,
    /// text or json.
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, default_value_t = 1.0)]
    mu0: f64,
    /// Average the input over the group before the invariant and block modes.
    #[arg(long)]
    symmetrize: bool,
    /// Run the modes on separate threads.
    #[arg(long)]
    parallel: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let req = RunRequest {
        input: args.input,
        degree: args.degree,
        modes: args.modes,
        format: args.format,
        solver: SolverConfig {
            tol: args.tol,
            max_iter: args.max_iter,
            mu0: args.mu0,
        },
        symmetrize: args.symmetrize,
        parallel: args.parallel,
        seed: args.seed,
    };
    match run(&req) {
        Ok(report) => {
            println!("{}", render(&report, req.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
