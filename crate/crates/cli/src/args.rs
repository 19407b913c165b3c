use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "thermocorr",
    version,
    about = "Correlations and entanglement from thermal states"
)]
#[command(args_conflicts_with_subcommands = true, subcommand_required = false)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Run the randomized invariant suite instead of a command.
    #[arg(long)]
    pub selftest: bool,

    /// Trials for `--selftest`.
    #[arg(long, default_value_t = 1000, requires = "selftest")]
    pub trials: usize,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical temperatures for entanglement generation.
    Threshold(ThresholdArgs),
    /// Run one protocol on n thermal systems.
    Protocol(ProtocolArgs),
    /// A measure against the available energy for two qubits.
    Sweep(SweepArgs),
    /// Best two-qubit concurrence under an energy budget.
    Optimize(OptimizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    TwoQubit,
    AllBip,
    SingleBip,
    GmeGhz,
    GmeDicke,
    UpperQubitQudit,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub family: Family,

    /// Register sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,

    /// Excitation number of the Dicke family.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    Bell,
    Verstraete,
    Ghz,
    GhzSingle,
    Xstate,
    Dicke,
    Circulant,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum)]
    pub name: ProtocolName,

    #[arg(long, default_value_t = 2)]
    pub n: usize,

    /// Local dimension (bell and circulant).
    #[arg(long, default_value_t = 2)]
    pub d: usize,

    #[arg(long = "kT")]
    pub kt: f64,

    #[arg(long, default_value_t = 1)]
    pub k: usize,

    /// Energy handed to the circulant protocol.
    #[arg(long = "deltaE")]
    pub delta_e: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKindArg {
    MiVsEnergy,
    ConcurrenceVsEnergy,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKindArg,

    #[arg(long = "kT")]
    pub kt: f64,

    #[arg(long, default_value_t = 50)]
    pub points: usize,

    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long = "kT")]
    pub kt: f64,

    /// Energy budget in units of E; `inf` for no limit.
    #[arg(long = "deltaE")]
    pub delta_e: f64,

    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
}
