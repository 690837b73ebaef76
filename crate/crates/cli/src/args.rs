use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "cespdc",
    version,
    about = "Two-photon correlations of a cavity-enhanced down-conversion source"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON file with default values for any flag; flags given on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Input coupler amplitude reflectance
    #[arg(long, global = true)]
    pub r1: Option<f64>,

    /// Back mirror amplitude reflectance
    #[arg(long, global = true)]
    pub r2: Option<f64>,

    /// Cavity round-trip time in seconds
    #[arg(long, global = true)]
    pub tau: Option<f64>,

    /// Absolute single-pass squeezing amplitude r
    #[arg(long, global = true, conflicts_with = "gain_frac")]
    pub gain: Option<f64>,

    /// Gain as a fraction of the threshold amplitude, in [0, 1)
    #[arg(long, global = true)]
    pub gain_frac: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to FILE instead of stdout
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Disable the thread pool for grid sweeps
    #[arg(long, global = true)]
    pub sequential: bool,

    /// Log verbosity (-v info, -vv debug)
    #[arg(long, short, global = true, action = ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bogoliubov coefficients A, B, C, D over a frequency grid
    Coeffs(FreqArgs),
    /// Quadrature noise spectra at theta = 0 and pi
    Squeeze(FreqArgs),
    /// Correlation comb weights and background
    G2(G2Args),
    /// Single-mode correlation function on a time grid
    #[command(name = "g2-single")]
    G2Single(SingleArgs),
    /// Comb rendered with Lorentzian peaks of finite width
    Render(RenderArgs),
    /// Multimode vs single-mode deviation at one point or over a scan
    Compare(CompareArgs),
    /// Multimode vs single-mode deviation over a parameter grid
    Scan(ScanArgs),
    /// Run the cross-validation suite; exits nonzero if any check fails
    Verify,
}

#[derive(Debug, Args, Serialize)]
pub struct FreqArgs {
    /// Lower grid edge (FSR units unless --rad-per-s)
    #[arg(long, allow_hyphen_values = true)]
    pub omega_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Interpret and print frequencies in rad/s
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub rad_per_s: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct G2Args {
    /// Largest lag index, or "auto"
    #[arg(long)]
    pub k_max: Option<String>,
    /// Upper bound on the automatic lag count
    #[arg(long)]
    pub k_cap: Option<usize>,
    /// Normalized envelopes for a comma-separated list of threshold fractions
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub envelopes: Option<Vec<f64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct SingleArgs {
    /// Time grid start, in seconds
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Also print the 2N+1 mode superposition
    #[arg(long)]
    pub modes: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    /// Peak width in seconds (default 0.02 tau)
    #[arg(long)]
    pub fwhm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub k_max: Option<String>,
    #[arg(long)]
    pub k_cap: Option<usize>,
    /// Divide by the trace value at T = 0
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub normalized: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Scan axes as name=start:stop:count with name in r1, r2, gainfrac
    #[arg(long, num_args = 1..=3, value_name = "AXIS")]
    pub scan: Option<Vec<String>>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Axes as name=start:stop:count with name in r1, r2, gainfrac
    #[arg(value_name = "AXIS")]
    #[serde(rename = "scan", skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}
