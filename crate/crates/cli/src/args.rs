use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ergopress",
    version,
    about = "Relative weighted pressure on towers of shifts of finite type"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-level pressure of the top shift with a Fekete bracket.
    Pressure(RunArgs),
    /// ω-weighted fiber sums, maximized over Z-words or averaged over an orbit.
    Weighted(RunArgs),
    /// Topological side against the best measure found, per (ω, n).
    VpCheck(RunArgs),
    /// Seeded random towers run through every property check.
    PropertySuite(SuiteArgs),
    /// Both sides across an ω grid, with second differences.
    SweepOmega(RunArgs),
    /// Writes random towers as JSON.
    GenRandom(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sup,
    Orbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorKind {
    /// Quotients of a random SFT by symbol-merging maps.
    Random,
    /// Products of full shifts over the point.
    Product,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Tower description (JSON).
    #[arg(long)]
    pub tower: PathBuf,
    /// Potential file (JSON map symbol -> value); overrides the tower's own.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// Comma-separated weights in [0, 1].
    #[arg(long, default_value = "1")]
    pub omega: String,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t = Mode::Sup)]
    pub mode: Mode,
    /// Periodic block over Z for orbit mode.
    #[arg(long)]
    pub base: Option<String>,
    /// Optimizer configuration (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Extra measure (JSON) evaluated alongside the optimizer.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Overrides the optimizer seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = GeneratorKind::Random)]
    pub generator: GeneratorKind,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = GeneratorKind::Random)]
    pub generator: GeneratorKind,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
