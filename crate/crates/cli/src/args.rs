use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "csi-outage",
    version,
    about = "Outage probability of limited-feedback beamforming with delayed CSI",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one operating point with the deterministic evaluators (and optionally Monte Carlo).
    Analytic(AnalyticArgs),
    /// Monte Carlo estimate at one operating point.
    Simulate(SimulateArgs),
    /// Sweep one parameter and emit one row per value and evaluator.
    Sweep(SweepArgs),
    /// Minimum RVQ codebook size for target outage levels over a persistence grid.
    CodebookSize(CodebookSizeArgs),
    /// High-SNR diversity slope.
    Diversity(DiversityArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
    /// Write a codebook file.
    GenCodebook(GenCodebookArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    MisoPbf,
    MisoRvq,
    MisoTas,
    MuTas,
    MuPbf,
    MuRvq,
}

impl SchemeName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeName::MisoPbf => "miso-pbf",
            SchemeName::MisoRvq => "miso-rvq",
            SchemeName::MisoTas => "miso-tas",
            SchemeName::MuTas => "mu-tas",
            SchemeName::MuPbf => "mu-pbf",
            SchemeName::MuRvq => "mu-rvq",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Evaluator {
    Closed,
    Quadrature,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    SnrDb,
    Rho,
    CodebookSize,
    Users,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodebookKindArg {
    Rvq,
    Tas,
}

/// Antenna counts, rate, SNR and persistence.
#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeName,
    /// Transmit antennas.
    #[arg(long, default_value_t = 4)]
    pub nt: u32,
    /// Receive antennas per user.
    #[arg(long, default_value_t = 1)]
    pub nr: u32,
    /// Users.
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    /// Rate in bits/s/Hz.
    #[arg(long, default_value_t = 2.0)]
    pub rate: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    /// Channel persistence in [0, 1].
    #[arg(long, conflicts_with_all = ["doppler_hz", "delay_s"])]
    pub rho: Option<f64>,
    /// Maximum Doppler shift; persistence follows the Jakes model.
    #[arg(long, requires = "delay_s")]
    pub doppler_hz: Option<f64>,
    /// Feedback delay in seconds.
    #[arg(long, requires = "doppler_hz")]
    pub delay_s: Option<f64>,
    /// RVQ codebook size.
    #[arg(long)]
    pub codebook_size: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Trials per random stream.
    #[arg(long, default_value_t = 65_536)]
    pub chunk: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArg {
    /// key=value file whose entries act as flags given before the command-line ones.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closed,quadrature")]
    pub eval: Vec<Evaluator>,
    /// Required when `mc` is among the evaluators.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub mc: McArgs,
    /// Use this RVQ codebook for every trial instead of redrawing one per trial.
    #[arg(long)]
    pub codebook_file: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum)]
    pub axis: Axis,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub values: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closed,quadrature,mc")]
    pub eval: Vec<Evaluator>,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct CodebookSizeArgs {
    #[arg(long, default_value_t = 4)]
    pub nt: u32,
    #[arg(long, default_value_t = 2.0)]
    pub rate: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1")]
    pub targets: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1.0,0.98,0.96,0.94,0.92,0.9,0.88,0.86,0.84,0.82,0.8"
    )]
    pub rho_values: Vec<f64>,
    #[arg(long, default_value_t = 65_536)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct DiversityArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_delimiter = ',', default_value = "40,50")]
    pub grid_db: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[command(flatten)]
    pub config: ConfigArg,
}

#[derive(Debug, Args)]
pub struct GenCodebookArgs {
    #[arg(long, value_enum, default_value_t = CodebookKindArg::Rvq)]
    pub kind: CodebookKindArg,
    #[arg(long, default_value_t = 4)]
    pub nt: u32,
    /// Number of vectors (RVQ only).
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArg,
}
