//! Argument definitions for the `fmres` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "fmres",
    version,
    about = "Financial-market resilience toolkit: TVP-VAR estimation, impulse responses, resilience indices, connectedness tables and mediation regressions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Values given here override the
/// config file.
#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Input panel CSV (first column `date`).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Random-number seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for parallel stages (0 = library default).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Descriptive statistics and unit-root tests for every panel column.
    Describe(DescribeArgs),
    /// Estimate the time-varying-parameter VAR with stochastic volatility.
    Estimate(EstimateArgs),
    /// Time-varying impulse responses from a posterior archive.
    Irf(IrfArgs),
    /// Resilience intensity and duration indices from a posterior archive.
    Resilience(ResilienceArgs),
    /// Variance-decomposition connectedness tables for a panel.
    Connect(ConnectArgs),
    /// Two-step mediation regressions.
    Mediate(MediateArgs),
    /// Run every stage end to end and write a manifest.
    Pipeline(PipelineArgs),
    /// Re-emit an artifact as tidy plot-ready CSV.
    Plotdata(PlotdataArgs),
    /// Generate the bundled synthetic demo dataset and a matching config.
    Demo(DemoArgs),
}

#[derive(Args, Debug, Default)]
pub struct DescribeArgs {
    /// Columns to log-difference before describing (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub logdiff: Option<Vec<String>>,
}

#[derive(Args, Debug, Default)]
pub struct EstimateArgs {
    /// Model variables in order (comma-separated column names).
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,

    /// Columns to log-difference before estimating (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub logdiff: Option<Vec<String>>,

    /// VAR lag order.
    #[arg(long)]
    pub lags: Option<usize>,

    /// Total Gibbs iterations, burn-in included.
    #[arg(long)]
    pub draws: Option<usize>,

    /// Iterations discarded before retention.
    #[arg(long)]
    pub burn_in: Option<usize>,

    /// Keep every `thin`-th retained draw.
    #[arg(long)]
    pub thin: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IrfArgs {
    /// Posterior archive produced by `estimate` (default `<out>/posterior.bin`).
    #[arg(long)]
    pub posterior: Option<PathBuf>,

    /// Response horizon (periods after impact, impact included).
    #[arg(long)]
    pub horizon: Option<usize>,

    /// Shock size in structural standard deviations.
    #[arg(long)]
    pub magnitude: Option<f64>,

    /// Which volatility scales the shock.
    #[arg(long, value_enum)]
    pub shock_scale: Option<ShockScaleArg>,
}

#[derive(Args, Debug)]
pub struct ResilienceArgs {
    /// Posterior archive produced by `estimate` (default `<out>/posterior.bin`).
    #[arg(long)]
    pub posterior: Option<PathBuf>,

    /// Responding variable (default: first archived variable).
    #[arg(long)]
    pub market: Option<String>,

    /// Shocked variable (default: last archived variable).
    #[arg(long)]
    pub shock: Option<String>,

    /// Response horizon the indices are computed over.
    #[arg(long)]
    pub horizon: Option<usize>,

    /// Shock size in structural standard deviations.
    #[arg(long)]
    pub magnitude: Option<f64>,

    /// Which volatility scales the shock.
    #[arg(long, value_enum)]
    pub shock_scale: Option<ShockScaleArg>,
}

#[derive(Args, Debug, Default)]
pub struct ConnectArgs {
    /// Variables entering the system in order (default: every panel column).
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,

    /// Columns to log-difference first (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub logdiff: Option<Vec<String>>,

    /// VAR lag order.
    #[arg(long)]
    pub lags: Option<usize>,

    /// Variance-decomposition forecast horizon.
    #[arg(long)]
    pub gfevd_horizon: Option<usize>,

    /// Also estimate date-by-date tables from a time-varying model.
    #[arg(long)]
    pub dynamic: bool,

    /// Total Gibbs iterations for the dynamic model.
    #[arg(long)]
    pub draws: Option<usize>,

    /// Burn-in for the dynamic model.
    #[arg(long)]
    pub burn_in: Option<usize>,

    /// Thinning for the dynamic model.
    #[arg(long)]
    pub thin: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct MediateArgs {
    /// Treatment column regressed on in every equation.
    #[arg(long)]
    pub cpu: Option<String>,

    /// Outcome columns, one equation each (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub outcomes: Option<Vec<String>>,

    /// Mediator columns, one equation each (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub mediators: Option<Vec<String>>,
}

#[derive(Args, Debug, Default)]
pub struct PipelineArgs {
    /// VAR lag order.
    #[arg(long)]
    pub lags: Option<usize>,

    /// Total Gibbs iterations, burn-in included.
    #[arg(long)]
    pub draws: Option<usize>,

    /// Iterations discarded before retention.
    #[arg(long)]
    pub burn_in: Option<usize>,

    /// Keep every `thin`-th retained draw.
    #[arg(long)]
    pub thin: Option<usize>,

    /// Impulse-response horizon.
    #[arg(long)]
    pub irf_horizon: Option<usize>,

    /// Variance-decomposition forecast horizon.
    #[arg(long)]
    pub gfevd_horizon: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PlotdataArgs {
    /// Artifact file to validate and re-emit.
    #[arg(long)]
    pub artifact: PathBuf,

    /// What the artifact is.
    #[arg(long, value_enum)]
    pub kind: PlotKind,
}

#[derive(Args, Debug, Default)]
pub struct DemoArgs {
    /// Number of monthly observations to generate.
    #[arg(long)]
    pub periods: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShockScaleArg {
    /// Sample-averaged structural standard deviations.
    Averaged,
    /// Each date's own structural standard deviations.
    TimeVarying,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    /// Long-format impulse-response surface.
    Irf,
    /// Resilience index series.
    Resilience,
    /// Dynamic connectedness series.
    Connect,
    /// Net pairwise directional connectedness, deduplicated.
    Npdc,
}
