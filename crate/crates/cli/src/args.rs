use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "annealab", version, about = "Adiabatic evolution laboratory for number-partitioning Ising systems", long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scan the instantaneous spectral gap over the schedule parameter s
    GapScan(GapScanArgs),
    /// Integrate the time-dependent Schrödinger evolution of an instance
    Evolve(EvolveArgs),
    /// Reconstruct a state from simulated Pauli measurements
    Tomo(TomoArgs),
    /// Solve an instance exactly by brute-force enumeration
    Partition(PartitionArgs),
    /// Run the full morphism-cost experiment and emit the report
    Ledger(LedgerArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    UniformInt,
    UniformReal,
}

impl From<Distribution> for annealab::WeightDistribution {
    fn from(d: Distribution) -> Self {
        match d {
            Distribution::UniformInt => annealab::WeightDistribution::UniformInt,
            Distribution::UniformReal => annealab::WeightDistribution::UniformReal,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorArg {
    /// Full 2^N space
    Full,
    /// +1 eigenspace of the global bit-flip operator
    Sym,
}

impl From<SectorArg> for annealab::Sector {
    fn from(s: SectorArg) -> Self {
        match s {
            SectorArg::Full => annealab::Sector::Full,
            SectorArg::Sym => annealab::Sector::FlipSymmetric,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Json,
    Csv,
}

/// Where the weights come from: a file or a seeded generator.
#[derive(Args, Debug, Clone, Serialize)]
pub struct InstanceArgs {
    /// Instance file: JSON {"weights": [...]} or one weight per line
    #[arg(long, value_name = "PATH", conflicts_with_all = ["gen", "n"])]
    pub instance: Option<PathBuf>,

    /// Draw weights from a seeded distribution (requires --n)
    #[arg(long, value_enum, requires = "n")]
    pub gen: Option<Distribution>,

    /// Number of qubits for --gen
    #[arg(long, requires = "gen")]
    pub n: Option<usize>,

    /// Seed for --gen and any sampling in the command [default: 0]
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads [default: available parallelism]
    #[arg(long, value_name = "J")]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct GapScanArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    /// Symmetry sector for the two lowest levels [default: sym]
    #[arg(long, value_enum, default_value = "sym")]
    pub sector: SectorArg,

    /// Uniform s-grid size [default: 64]
    #[arg(long, default_value_t = 64)]
    pub grid: usize,

    /// Output format [default: csv]
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    /// Total evolution time T (0 = sudden quench)
    #[arg(long)]
    pub time: f64,

    /// Integrator steps [default: chosen so the per-step angle is 0.1]
    #[arg(long)]
    pub steps: Option<usize>,

    /// Ground-overlap checkpoints along the schedule [default: 16]
    #[arg(long, default_value_t = 16)]
    pub checkpoints: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct TomoArgs {
    /// State source: an evolve output file
    #[arg(long, value_name = "PATH", conflicts_with = "product")]
    pub state: Option<PathBuf>,

    /// State source: a product-state spec {"factors": [[[re,im],[re,im]], ...]}
    #[arg(long, value_name = "PATH")]
    pub product: Option<PathBuf>,

    /// Measurement scheme [default: full]
    #[arg(long, value_enum, default_value = "full")]
    pub mode: ModeArg,

    /// Shots per measurement setting [default: 10000]
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,

    /// Sampling seed [default: 0]
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Full,
    Product,
}

#[derive(Args, Debug, Serialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct LedgerArgs {
    /// Smallest system size
    #[arg(long, value_name = "N")]
    pub n_min: usize,

    /// Largest system size
    #[arg(long, value_name = "N")]
    pub n_max: usize,

    /// Stride through system sizes [default: 2]
    #[arg(long, default_value_t = 2)]
    pub n_step: usize,

    /// Perfect-partition instances per system size [default: 10]
    #[arg(long, default_value_t = 10)]
    pub instances: usize,

    /// Target success probability for the threshold scan [default: 0.99]
    #[arg(long, default_value_t = 0.99)]
    pub target: f64,

    /// Experiment seed [default: 0]
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Smallest evolution time tried by the scan [default: 1]
    #[arg(long, default_value_t = 1.0)]
    pub scan_floor: f64,

    /// Evolution-time cap; capped scans are flagged, not fatal [default: 1e6]
    #[arg(long, default_value_t = 1e6)]
    pub scan_cap: f64,

    /// Relative bisection resolution of the scan [default: 0.05]
    #[arg(long, default_value_t = 0.05)]
    pub scan_resolution: f64,

    /// Output format [default: json]
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,

    #[command(flatten)]
    pub output: OutputArgs,
}
