use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::ModeKind;

#[derive(Debug, Parser)]
#[command(name = "bandwidth-verifier", version, about = "Band-width estimates for CMC initial data sets on warped bands")]
pub struct Cli {
    /// JSON run configuration (band, extrinsic data and run parameters).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Directory for the report, CSV fields and SVG plots.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Do not print the report on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Add wall-clock timings to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form and RK4 solutions of the Riccati comparison equation.
    SolveEta(SolveEtaArgs),
    /// Width certificate for a band.
    CheckWidth(WidthArgs),
    /// Principal eigenvalue of the stability operator on a leaf.
    Stability(StabilityArgs),
    /// Perturbed spacetime-harmonic function and integral inequality (n = 3).
    Harmonic(HarmonicArgs),
    /// Scalar certificate of the Callias-operator argument.
    CalliasCert(CalliasArgs),
    /// Saturation corpus of the three rigid bands.
    Examples,
    /// Seeded random consistency sweep of the width estimate.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Above,
    Below,
}

#[derive(Debug, Args)]
pub struct SolveEtaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Position of the singularity (Rational, Coth) or centre (Tan).
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = BranchArg::Above)]
    pub branch: BranchArg,
    /// Closed form only (default).
    #[arg(long, conflicts_with_all = ["numeric", "both"])]
    pub closed: bool,
    /// RK4 only.
    #[arg(long, conflicts_with = "both")]
    pub numeric: bool,
    /// Both, with their maximal deviation.
    #[arg(long)]
    pub both: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub tmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tmax: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// RK4 steps per output interval.
    #[arg(long, default_value_t = 20)]
    pub substeps: usize,
    /// Initial value at `tmin` for RK4; defaults to the closed form there.
    #[arg(long, allow_negative_numbers = true)]
    pub eta_init: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BandArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tminus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tplus: Option<f64>,
    /// Grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeKind>,
    /// `tr k` (CMC) or its upper bound (sup-trace).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    #[command(flatten)]
    pub band: BandArgs,
    /// Also write an SVG plot of the margin fields.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Leaf position.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Sites per axis.
    #[arg(long)]
    pub lattice: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HarmonicArgs {
    #[command(flatten)]
    pub band: BandArgs,
    /// Use `Hess u - k~ |grad u|` instead of the adopted sign.
    #[arg(long)]
    pub paper_sign: bool,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Args)]
pub struct CalliasArgs {
    #[command(flatten)]
    pub band: BandArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Plateau widths near t0 and t1: `w` or `w0,w1`.
    #[arg(long, value_delimiter = ',', num_args = 1..=2)]
    pub plateau: Option<Vec<f64>>,
    /// Bound on the bundle curvature.
    #[arg(long)]
    pub re_bound: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
}
