//! Command-line front end: argument parsing, dispatch and exit codes.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a numerical check fails. Errors go
//! to standard error. Worker threads follow the `ISOFIELD_THREADS` environment variable.

pub mod commands;
pub mod io;
pub mod verify;

use crate::error::Result;
use crate::simulate::with_threads;
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;
pub use verify::{verify_all, Budget, CriterionResult, VerifyReport};

#[derive(Debug, Parser)]
#[command(name = "isofield", version, about = "Isotropic random fields on R^3 and on the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spin-weighted spherical harmonics.
    #[command(subcommand)]
    Harmonics(HarmonicsCmd),
    /// Real-basis coupling coefficients.
    #[command(subcommand)]
    Gg(GgCmd),
    /// Closed-form correlation tensors.
    #[command(subcommand)]
    Corr(CorrCmd),
    /// Monte-Carlo realizations of fields on R^3.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Empirical estimators.
    #[command(subcommand)]
    Estimate(EstimateCmd),
    /// CMB map synthesis and power spectrum estimation.
    #[command(subcommand)]
    Cmb(CmbCmd),
    /// Rerun every acceptance check and print a JSON report.
    Verify {
        #[arg(value_enum)]
        budget: Budget,
        /// Report destination (`-` for standard output).
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum HarmonicsCmd {
    /// Print one value of the spin-s harmonic.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        spin: i64,
        #[arg(long)]
        ell: usize,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Tabulate harmonics on a Gauss-Legendre grid with N rings and 2N-1 longitudes.
    Table {
        #[arg(long)]
        ell_max: usize,
        #[arg(long)]
        grid: usize,
        /// Comma-separated spin weights.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
        spin: Vec<i64>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GgCmd {
    /// Write every non-zero coefficient with degrees up to ell_max.
    Table {
        #[arg(long)]
        ell_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare closed-form Gaunt integrals with quadrature.
    Check {
        #[arg(long, default_value_t = 6)]
        ell_max: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorrCmd {
    /// Evaluate a correlation model at one separation.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Separation vector "x,y,z".
        #[arg(long, allow_hyphen_values = true)]
        sep: String,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
pub struct SimArgs {
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Master seed; replaces any seed in the plan file.
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCmd {
    Scalar(SimArgs),
    Vector(SimArgs),
    Dyadic(SimArgs),
}

#[derive(Debug, Subcommand)]
pub enum EstimateCmd {
    /// Empirical covariance tensors with jackknife standard errors.
    Corr {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CmbCmd {
    /// Draw maps of (Theta, Q, U, V) on a Gauss-Legendre grid.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        ell_max: usize,
        /// Number of Gauss-Legendre rings.
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        realizations: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate angular power spectra from maps written by `cmb synth`.
    Cell {
        #[arg(long = "in")]
        input: PathBuf,
        /// Analysis degree; defaults to the number of rings minus one.
        #[arg(long)]
        ell_max: Option<usize>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

/// Executes a parsed command and returns its exit code.
pub fn dispatch(cli: Cli) -> Result<i32> {
    use commands::*;
    match cli.command {
        Command::Harmonics(HarmonicsCmd::Eval { spin, ell, m, theta, phi }) => {
            harmonics_eval(spin, ell, m, theta, phi)?
        }
        Command::Harmonics(HarmonicsCmd::Table { ell_max, grid, spin, out }) => {
            harmonics_table(ell_max, grid, &spin, &out)?
        }
        Command::Gg(GgCmd::Table { ell_max, out }) => gg_table(ell_max, &out)?,
        Command::Gg(GgCmd::Check { ell_max, tolerance }) => return gg_check(ell_max, tolerance),
        Command::Corr(CorrCmd::Eval { model, sep, out }) => corr_eval(&model, &sep, &out)?,
        Command::Simulate(cmd) => {
            let (kind, a) = match cmd {
                SimulateCmd::Scalar(a) => ("scalar", a),
                SimulateCmd::Vector(a) => ("vector", a),
                SimulateCmd::Dyadic(a) => ("dyadic", a),
            };
            simulate_cmd(kind, &a.plan, a.seed, &a.out)?
        }
        Command::Estimate(EstimateCmd::Corr { input, pairs, out }) => estimate_corr(&input, &pairs, &out)?,
        Command::Cmb(CmbCmd::Synth { spec, ell_max, grid, seed, realizations, out }) => {
            cmb_synth(&spec, ell_max, grid, seed, realizations, &out)?
        }
        Command::Cmb(CmbCmd::Cell { input, ell_max, out }) => cmb_cell(&input, ell_max, &out)?,
        Command::Verify { budget, out } => {
            let report = verify_all(budget);
            write_report(&report, &out)?;
            for c in report.criteria.iter().filter(|c| !c.passed) {
                eprintln!("error: criterion {} ({}) failed: {}", c.id, c.name, c.detail);
            }
            return Ok(if report.passed { 0 } else { 2 });
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn parse_and_dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match with_threads(None, || dispatch(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
