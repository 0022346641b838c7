//! The `hlito` command line.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a `--check` run
//! computes a result outside its tolerance.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    DetmArgs, ExpandArgs, LatticeArgs, MehlerArgs, OrthoArgs, PolyArgs, SimMode, SimulateArgs,
    SpectrumArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

/// Environment variable that overrides any `--seed`.
pub const SEED_ENV: &str = "HLITO_SEED";

const SUBCOMMANDS: &[&str] = &[
    "poly", "spectrum", "detm", "mehler", "ortho", "expand", "simulate", "lattice",
];

#[derive(Debug, Parser)]
#[command(name = "hlito", version, about = "Spectral toolkit for normal Ornstein-Uhlenbeck operators")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat key = value file; entries act as flags given before the explicit ones.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of J_{m,n}(z, rho).
    Poly(PolyArgs),
    /// Eigenvalues up to a level.
    Spectrum(SpectrumArgs),
    /// Determinant of the tridiagonal level matrix, and optionally its null vector.
    Detm(DetmArgs),
    /// Mehler kernel against its eigen-series, as CSV.
    Mehler(MehlerArgs),
    /// Gram matrix of the J basis under quadrature, as CSV.
    Ortho(OrthoArgs),
    /// J-basis coefficients and Parseval sums of a function.
    Expand(ExpandArgs),
    /// Monte Carlo runs of the complex OU process and Brownian martingales.
    Simulate(SimulateArgs),
    /// Circle-lattice decomposition and reassembled simulation.
    Lattice(LatticeArgs),
}

/// Result of one command: the text for `--out`/stdout, optional notes for
/// stderr, and whether a requested check failed.
pub(crate) struct Outcome {
    pub text: String,
    pub notes: Option<String>,
    pub check_failed: bool,
}

fn seed_override() -> Result<Option<u64>, String> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got '{v}'")),
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run(args: Vec<OsString>) -> i32 {
    let args = match config::expand_config(args, SUBCOMMANDS) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let mut cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match seed_override() {
        Ok(Some(seed)) => match &mut cli.command {
            Command::Mehler(a) => a.seed = seed,
            Command::Simulate(a) => a.seed = seed,
            Command::Lattice(a) => a.seed = seed,
            _ => {}
        },
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    }
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_INVALID;
        }
        // a pool that already exists (second call in one process) is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }

    let outcome = match &cli.command {
        Command::Poly(a) => commands::poly(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Detm(a) => commands::detm(a),
        Command::Mehler(a) => commands::mehler(a),
        Command::Ortho(a) => commands::ortho(a),
        Command::Expand(a) => commands::expand(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Lattice(a) => commands::lattice(a),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };

    if let Some(notes) = &outcome.notes {
        eprint!("{notes}");
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    if outcome.check_failed {
        eprintln!("check failed");
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}
