//! `betapoly`: closed-form and Monte Carlo evaluation of expected volumes
//! and facet functionals of random beta polytopes.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 selftest
//! failure.

mod commands;
mod parse;
mod report;
mod selftest;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use betapoly::closedform::DEFAULT_BUDGET;

#[derive(Debug, Parser)]
#[command(name = "betapoly", version, about = "Expected volumes and facet functionals of random beta polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (default: json for reports, csv for sweeps).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Record wall-clock time in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionalKind {
    Volume,
    Wieacker,
}

#[derive(Debug, Clone, Args)]
pub struct Numerics {
    /// Relative tolerance of the h-integrals.
    #[arg(long = "rel-tol", default_value = "1e-11", value_parser = positive_number)]
    pub rel_tol: f64,

    /// Cap on the number of distinct subset groups.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Clone, Args)]
pub struct Polytope {
    /// Ambient dimension.
    #[arg(long = "d", value_parser = clap::value_parser!(u64).range(1..))]
    pub d: u64,

    /// Per-point β values: "b1,b2,..." (decimals or fractions such as -1/2)
    /// or "equal:<beta>:<n>".
    #[arg(long, allow_hyphen_values = true, value_parser = parse::betas_arg)]
    pub betas: parse::Betas,
}

#[derive(Debug, Clone, Args)]
pub struct Seeded {
    /// Monte Carlo seed.
    #[arg(long, env = "BETAPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected volume of the hull.
    Volume {
        #[command(flatten)]
        polytope: Polytope,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        seeded: Seeded,
    },
    /// Expected Σ over facets of dist(0, F)^a · Vol(F)^b.
    Wieacker {
        #[command(flatten)]
        polytope: Polytope,
        #[arg(long, allow_hyphen_values = true, value_parser = parse::number_arg)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse::number_arg)]
        b: f64,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        seeded: Seeded,
    },
    /// k-th moment of the volume of the simplex spanned by n = len(betas)
    /// points in dimension n - 1.
    Moment {
        #[arg(long, allow_hyphen_values = true, value_parser = parse::betas_arg)]
        betas: parse::Betas,
        #[arg(long, allow_hyphen_values = true, value_parser = parse::number_arg)]
        k: f64,
        #[command(flatten)]
        seeded: Seeded,
    },
    /// Closed form next to a Monte Carlo estimate, with the z-score.
    Verify {
        #[command(flatten)]
        polytope: Polytope,
        #[arg(long, value_enum, default_value = "volume")]
        functional: FunctionalKind,
        #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = parse::number_arg)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = parse::number_arg)]
        b: f64,
        /// Number of random polytopes.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        seeded: Seeded,
    },
    /// Vary one parameter over a grid; one output row per grid point.
    Sweep {
        #[command(flatten)]
        polytope: Polytope,
        #[arg(long, value_enum, default_value = "volume")]
        functional: FunctionalKind,
        #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = parse::number_arg)]
        a: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "0", value_parser = parse::number_arg)]
        b: f64,
        /// Swept parameter: "n", "a", "b", or "beta:<index>" (0-based).
        /// For "n" the β list is repeated cyclically to length n.
        #[arg(long)]
        param: String,
        /// Grid: "v1,v2,..." or "start:stop:step".
        #[arg(long, allow_hyphen_values = true, value_parser = parse::grid_arg)]
        values: parse::Grid,
        /// Monte Carlo samples per grid point (0 for none).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        seeded: Seeded,
    },
    /// Run the built-in consistency checks.
    Selftest,
}

fn positive_number(s: &str) -> Result<f64, String> {
    let x = parse::number_arg(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("cli::parse_number: must be positive, got {s}"))
    }
}

/// Failure categories, mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
    Selftest { output: String, failed: usize },
}

impl From<betapoly::Error> for Failure {
    fn from(e: betapoly::Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads as usize).build() {
            Ok(pool) => pool.install(|| commands::run(&cli)),
            Err(e) => Err(Failure::Usage(format!("cli::threads: {e}"))),
        },
        None => commands::run(&cli),
    };
    match outcome {
        Ok(mut text) => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Selftest { output, failed }) => {
            let _ = std::io::stdout().lock().write_all(output.as_bytes());
            eprintln!("error: cli::selftest: {failed} check(s) failed");
            ExitCode::from(3)
        }
    }
}
