use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tingdof::{Rational, Scalar, Side};

#[derive(Debug, Parser)]
#[command(
    name = "tingdof",
    version,
    about = "GDoF regions of treating interference as noise in multi-cell networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that each cell lists its users by ascending direct strength.
    Validate(NetArg),
    /// Report whether the network is in the TIN or CTIN regime.
    Classify(Common),
    /// Print the constraints of one polyhedral region.
    Region(RegionArgs),
    /// Test whether a GDoF tuple is reachable by some TIN strategy.
    Member(MemberArgs),
    /// Maximize a weighted GDoF sum over a region or over all regions.
    Maxsum(MaxsumArgs),
    /// Per-user GDoF and effective interference of a strategy.
    Bounds(StrategyArgs),
    /// Finite-SNR rates of a downlink strategy.
    Rates(RatesArgs),
    /// Map a strategy to the other side of the network.
    Dualize(DualizeArgs),
    /// Brute-force search over decoding orders and a grid of power levels.
    Oracle(OracleArgs),
    /// Sum-GDoF with and without interference alignment (two cells, users [2, 1]).
    Ia(Common),
    /// Check the deterministic-model entropy inequalities.
    Adt(AdtArgs),
}

#[derive(Debug, Args)]
pub struct NetArg {
    /// Network file (JSON with fields K, L, alpha).
    #[arg(long, value_name = "FILE")]
    pub net: PathBuf,
}

#[derive(Debug, Args)]
pub struct Arithmetic {
    /// Use exact rational arithmetic.
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    /// Use double-precision arithmetic.
    #[arg(long)]
    pub float: bool,
}

impl Arithmetic {
    pub fn is_exact(&self, default: bool) -> bool {
        if self.exact {
            true
        } else if self.float {
            false
        } else {
            default
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    #[command(flatten)]
    pub net: NetArg,
    #[command(flatten)]
    pub arithmetic: Arithmetic,
}

/// `id`/`all` or a JSON file.
#[derive(Clone, Debug, PartialEq)]
pub enum Selector {
    Default,
    File(PathBuf),
}

fn selector(default: &'static str) -> impl Fn(&str) -> Result<Selector, String> + Clone {
    move |s: &str| {
        if s == default {
            Ok(Selector::Default)
        } else {
            Ok(Selector::File(PathBuf::from(s)))
        }
    }
}

#[derive(Debug, Args)]
pub struct RegionSelection {
    /// Decoding order: `id` or a JSON file of 1-based slot lists per cell.
    #[arg(long, value_name = "id|FILE", default_value = "id", value_parser = selector("id"))]
    pub order: Selector,
    /// Active users: `all` or a JSON file of 1-based slot lists per cell.
    #[arg(long, value_name = "all|FILE", default_value = "all", value_parser = selector("all"))]
    pub subnet: Selector,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub selection: RegionSelection,
    /// Print the TIN-regime outer bound instead.
    #[arg(long, conflicts_with_all = ["order", "subnet"])]
    pub outer: bool,
}

fn decimal(s: &str) -> Result<String, String> {
    Rational::from_decimal_str(s)
        .map(|_| s.to_string())
        .map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    #[command(flatten)]
    pub common: Common,
    /// GDoF tuple, cell by cell, comma separated.
    #[arg(long, value_delimiter = ',', required = true, value_parser = decimal)]
    pub point: Vec<String>,
}

#[derive(Debug, Args)]
pub struct MaxsumArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub selection: RegionSelection,
    /// Maximize over every (active set, order) pair.
    #[arg(long, conflicts_with_all = ["order", "subnet"])]
    pub union: bool,
    /// Non-negative weights, cell by cell; defaults to all ones.
    #[arg(long, value_delimiter = ',', value_parser = decimal)]
    pub weights: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct StrategyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Strategy file (JSON with fields side, order, r).
    #[arg(long, value_name = "FILE")]
    pub strategy: PathBuf,
    /// Evaluate the strategy on this side instead of the one in the file.
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "FILE")]
    pub strategy: PathBuf,
    /// Nominal SNR, must exceed 1.
    #[arg(long, value_name = "P", default_value_t = 1e12)]
    pub pnominal: f64,
}

#[derive(Debug, Args)]
pub struct DualizeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "FILE")]
    pub strategy: PathBuf,
    /// Dualize uplink strategies as given, without repairing their order.
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = SideArg::Ibc)]
    pub side: SideArg,
    /// Grid step of the power exponents.
    #[arg(long, value_name = "STEP", default_value = "0.05", value_parser = decimal)]
    pub grid: String,
    /// Deepest power reduction; defaults to the strongest link plus one.
    #[arg(long, value_name = "R", value_parser = decimal)]
    pub rmax: Option<String>,
    /// Maximum number of strategies to evaluate.
    #[arg(long, default_value_t = tingdof::oracle::DEFAULT_BUDGET)]
    pub budget: u128,
    /// Weights of the reported maximum sum; defaults to all ones.
    #[arg(long, value_delimiter = ',', value_parser = decimal)]
    pub weights: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = OracleFormat::Json)]
    pub format: OracleFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleFormat {
    /// Summary with the best weighted sum.
    Json,
    /// Every distinct GDoF tuple, one per row.
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Ibc,
    Imac,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Ibc => Side::Ibc,
            SideArg::Imac => Side::Imac,
        }
    }
}

#[derive(Debug, Args)]
pub struct AdtArgs {
    /// Link levels m1,m2,n1,n2.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    pub params: Vec<u32>,
    /// Inequality to check; defaults to every one whose regime holds.
    #[arg(long, value_enum)]
    pub mode: Option<AdtMode>,
    /// Number of random product distributions.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdtMode {
    LessNoisy,
    EntropyGap,
}
