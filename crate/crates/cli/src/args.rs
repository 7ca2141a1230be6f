use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bellwalk", version, about = "Experiments with the two-qubit Bell-coin quantum walk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplitudes of the final state, one row per site and component.
    Simulate(RunArgs),
    /// Compare closed-form amplitudes with the step recursion for t <= T.
    CheckClosedForm(RunArgs),
    /// Spin-position entanglement E(t) for t = 0..T.
    EntropySeries(RunArgs),
    /// Site probabilities and per-site spin entanglement at time T.
    Grid(RunArgs),
    /// Entangling power of the walk for t = 0..T.
    Epower(RunArgs),
    /// Sandwiched and Petz Renyi divergences from the initial spin, t = 1..T.
    Renyi(RunArgs),
    /// Spinor identities and packet normalization of the continuum limit.
    ContinuumCheck(RunArgs),
    /// Least-squares tail fit of a computed or loaded series.
    Fit(RunArgs),
}

impl Command {
    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::CheckClosedForm(a)
            | Command::EntropySeries(a)
            | Command::Grid(a)
            | Command::Epower(a)
            | Command::Renyi(a)
            | Command::ContinuumCheck(a)
            | Command::Fit(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::CheckClosedForm(_) => "check-closed-form",
            Command::EntropySeries(_) => "entropy-series",
            Command::Grid(_) => "grid",
            Command::Epower(_) => "epower",
            Command::Renyi(_) => "renyi",
            Command::ContinuumCheck(_) => "continuum-check",
            Command::Fit(_) => "fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Entropy,
    Epower,
    Srd,
    Rre,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON experiment file; flags given here override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Coin as `x,y,z` (decimals or fractions like 1/6) or a preset p1, p2, p3.
    #[arg(long)]
    pub coin: Option<String>,

    /// Initial spin as four complex numbers, e.g. `0.6,0.8i,0,0`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "spin_preset")]
    pub spin: Option<String>,

    /// Initial spin preset: initen or renyi.
    #[arg(long)]
    pub spin_preset: Option<String>,

    /// Number of steps.
    #[arg(long = "T", value_name = "T")]
    pub steps: Option<usize>,

    /// Renyi order.
    #[arg(long)]
    pub alpha: Option<String>,

    /// Gauss-Legendre nodes per polar angle.
    #[arg(long)]
    pub n_theta: Option<usize>,

    /// Trapezoid nodes per phase.
    #[arg(long)]
    pub n_alpha: Option<usize>,

    /// Fit or averaging window `t0,t1`.
    #[arg(long)]
    pub window: Option<String>,

    /// Entropy target: spin, qubit-a or qubit-b.
    #[arg(long)]
    pub subsystem: Option<String>,

    /// Qubit kept for per-site entanglement: a or b.
    #[arg(long)]
    pub keep: Option<String>,

    /// Series measure to fit.
    #[arg(long, value_enum)]
    pub measure: Option<Measure>,

    /// Series CSV (`t,value`) to fit instead of computing one.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Tail basis of a preset (p1, p2, p3) for `fit`.
    #[arg(long)]
    pub basis_preset: Option<String>,

    /// JSON list of basis terms for `fit`.
    #[arg(long)]
    pub basis: Option<PathBuf>,

    /// Pass threshold for `check-closed-form`.
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
