mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Simultaneous Diophantine approximation on polynomial curves.
#[derive(Parser, Debug)]
#[command(name = "dioph", version, about)]
pub struct Cli {
    /// Worker threads for the exhaustive scans (reports do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Outputs {
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write a CSV table here, where the command has one.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type, diameter, integerization constants and normal form of a curve.
    Analyze {
        #[arg(long)]
        curve: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    /// Print a normalization of the curve in the curve text format.
    Normalize {
        #[arg(long)]
        curve: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    /// Hausdorff dimension bounds for one exponent or a range `a..b[:step]`.
    Predict {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        out: Outputs,
    },
    /// Estimate the simultaneous approximation exponent above a real.
    Exponent {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        real: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Run the divisibility certificate on every q up to qmax.
    Certify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        real: String,
        #[arg(long)]
        qmax: u64,
        /// Exponent for the threshold variant; the default threshold otherwise.
        #[arg(long)]
        tau: Option<String>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Compare the measured exponent with the prediction for a real of given lambda_1.
    Verify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        lambda1: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        /// Skip the hypothesis gate and only collect data.
        #[arg(long)]
        explore: bool,
        #[command(flatten)]
        out: Outputs,
    },
    /// Build a real approximable to degree psi but not c*psi, then check a window.
    Construct {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        psi: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Membership window scanned for foreign solutions.
        #[arg(long, default_value_t = 100_000)]
        qmax: u64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Collect exponent data where the identity is only conjectured.
    Explore {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        lambda1: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
        #[command(flatten)]
        out: Outputs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
