mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use pbkit::fitter::Caps;
use pbkit::numeric::DEFAULT_SEED;
use pbkit::system::NONDEGENERATE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exact Poisson-bracket algebra checks for superintegrable systems.
#[derive(Debug, Parser)]
#[command(name = "pbkit", version)]
pub struct Cli {
    /// Built-in system name or path to a `.psys` file.
    #[arg(long, global = true, default_value = NONDEGENERATE)]
    pub system: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum exponent of each parameter in fitted coefficients.
    #[arg(long, global = true, default_value_t = Caps::DEFAULT_PARAM_EXPONENT, value_parser = clap::value_parser!(u32).range(0..=8))]
    pub param_degree: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Integrator step for `orbit`.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub step: f64,
    /// Integration time for `orbit`.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub duration: f64,
    /// Drift and finite-difference tolerance for `orbit`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Relation table to check instead of the shipped one.
    #[arg(long, global = true)]
    pub relations: Option<PathBuf>,
    /// Report recorded misprints in printed formulas as warnings rather than failures.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    pub allow_paper_typos: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the system's Hamiltonian, integrals and auxiliary definitions.
    Catalog,
    /// Compute `{f, g}` for two expressions over the system's names.
    Bracket { f: String, g: String },
    /// Check first integrals, the commutation pattern and the relation table.
    Verify,
    /// Fit every `{S_i, {S_j, S_k}}` as a quadratic polynomial in the integrals.
    Closure,
    /// Fit the structure function `{A,B}^2 = 2 F(A, B, H, extra)`.
    FitStructure {
        a: String,
        b: String,
        #[arg(long)]
        extra: String,
    },
    /// Jacobian ranks at rational points and linear independence of the integrals.
    Independence,
    /// Integrate an orbit and report conservation drift and finite-difference brackets.
    Orbit {
        /// Write the trajectory as CSV (t, x, y, z, px, py, pz).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare printed structure functions, relations and identities with exact results.
    DiffPaper,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pbkit: {e}");
            ExitCode::from(2)
        }
    }
}
