use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lmg_core::SpinJ;

#[derive(Debug, Parser)]
#[command(
    name = "lmg",
    version,
    about = "Spectra, supersymmetry checks and spectral gaps of the antiferromagnetic LMG model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels over a γ grid, with zero-mode and doublet labels.
    Spectrum(Opts),
    /// Spectral gap against the cosh 2γ bound.
    GapScan(Opts),
    /// Superalgebra residuals, determinant factorization and level pattern.
    SusyCheck(Opts),
    /// Amplitudes of the exact zero-energy ground state.
    GroundState(Opts),
    /// Wall time of the large-J gap computation.
    Bench(Opts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::GapScan(_) => "gap-scan",
            Command::SusyCheck(_) => "susy-check",
            Command::GroundState(_) => "ground-state",
            Command::Bench(_) => "bench",
        }
    }

    pub fn opts(&self) -> &Opts {
        match self {
            Command::Spectrum(o)
            | Command::GapScan(o)
            | Command::SusyCheck(o)
            | Command::GroundState(o)
            | Command::Bench(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Susy,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Factorized,
    Rotated,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Total spin J, e.g. 2, 3/2 or 1.5.
    #[arg(long = "j", value_name = "J")]
    pub j: Option<SpinJ>,

    /// Comma-separated list of J values.
    #[arg(long = "j-list", value_name = "J,...", value_delimiter = ',')]
    pub j_list: Vec<SpinJ>,

    /// Explicit γ values, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma: Vec<f64>,

    /// Lower end of the closed γ interval.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_min: Option<f64>,

    /// Upper end of the closed γ interval.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_max: Option<f64>,

    /// Number of equally spaced γ points, endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,

    #[arg(long, value_enum, default_value_t = ModelArg::Susy)]
    pub model: ModelArg,

    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub chi1: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub chi2: Option<f64>,

    #[arg(long = "lambda", allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write a gnuplot script that plots the CSV written to --out.
    #[arg(long, value_name = "PATH")]
    pub emit_plot: Option<PathBuf>,

    /// Pairing and zero-mode tolerance for level classification.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Worker threads; overrides LMG_THREADS.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Frame of the ground state (ground-state only).
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
}
