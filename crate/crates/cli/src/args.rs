use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ballcert_core::real::{DEFAULT_BITS, DEFAULT_MAX_BITS};

#[derive(Debug, Parser)]
#[command(name = "ballcert", version, about = "Certified checks of inequalities for unit-ball volumes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check registry claims and report verdicts.
    Verify(RunArgs),
    /// Print per-point values, bounds and margins of one claim.
    Table(RunArgs),
    /// Derivative sign scans of the conjectured completely monotonic functions.
    Scan(RunArgs),
    /// Empirical frontier of the open double inequality's constants.
    Search(RunArgs),
    /// List the registry.
    Registry(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Claim ids, comma separated or repeated; `all` selects the registry.
    #[arg(long = "id", value_delimiter = ',')]
    pub ids: Vec<String>,

    /// Largest dimension of sequence claims.
    #[arg(long)]
    pub n_max: Option<u64>,

    /// Real grid `start:end:count[:log]` replacing the claim's default.
    #[arg(long)]
    pub grid: Option<String>,

    /// Working precision in bits.
    #[arg(long, env = "BALLCERT_PREC", default_value_t = DEFAULT_BITS)]
    pub prec: u32,

    /// Escalation ceiling in bits.
    #[arg(long, default_value_t = DEFAULT_MAX_BITS)]
    pub max_prec: u32,

    /// Highest derivative order of sign scans.
    #[arg(long)]
    pub max_order: Option<usize>,

    /// Permit scan orders above the default ceiling.
    #[arg(long)]
    pub allow_high_order: bool,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
