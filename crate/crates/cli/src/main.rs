//! `toeplipz`: spectral bounds for convolution kernels from the command line.
//!
//! Exit codes: 0 success, 2 I/O or parse failure, 3 constraint violation,
//! 4 numerical-quality failure.

mod commands;
mod error;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "toeplipz", version, about = "Lipschitz bounds and structured factorizations for convolutions")]
struct Cli {
    /// Seed for the randomized estimators. Drawn from entropy and printed to stderr when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
struct OutputMode {
    /// Emit JSON.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit a plain-text table (the default).
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper bound on the largest singular value of a convolution kernel.
    Lipbound {
        kernel: PathBuf,
        /// Grid samples per frequency axis [default: 10 * max(d, 1)].
        #[arg(long)]
        samples: Option<usize>,
        /// Scale grid maxima by the guarantee factor so the bound is certified.
        #[arg(long)]
        corrected: bool,
        #[command(flatten)]
        output: OutputMode,
    },
    /// Run every estimator on a kernel file, or on each kernel file in a directory.
    Compare {
        kernel: PathBuf,
        /// Side of the square input.
        #[arg(long)]
        input_size: usize,
        /// Iterations for the two power methods.
        #[arg(long, default_value_t = 100)]
        iters: usize,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        corrected: bool,
        /// Timed runs per method; the median is reported.
        #[arg(long, default_value_t = 5)]
        runs: usize,
        /// Untimed runs before measuring.
        #[arg(long, default_value_t = 1)]
        warmup: usize,
        #[command(flatten)]
        output: OutputMode,
    },
    /// Factor a square matrix into diagonal and circulant factors.
    Decompose {
        matrix: PathBuf,
        /// Rank to truncate to; must divide the dimension.
        #[arg(long)]
        rank: usize,
        /// Where to write the factor file.
        #[arg(long)]
        out: PathBuf,
        /// Largest acceptable relative Frobenius reconstruction error.
        #[arg(long, default_value_t = toeplipz_core::dc::DEFAULT_RECONSTRUCTION_TOL)]
        tol: f64,
    },
    /// Gap between the bound and the exact norm for a list of input sizes, as CSV.
    Gamma {
        kernel: PathBuf,
        /// Comma-separated sizes or inclusive ranges, e.g. `4,8` or `5..24`.
        #[arg(long, value_parser = commands::parse_n_list)]
        n_list: commands::NList,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        corrected: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
