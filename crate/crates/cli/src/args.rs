use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use gapforge::numeric::decimal::parse_count;

/// Integer flag values; scientific notation such as `1e8` is accepted.
fn count(text: &str) -> Result<u64, String> {
    parse_count(text).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "gapforge", version, about = "Prime gap scans against auxiliary-sequence bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the primes up to a limit
    Sieve(SieveArgs),
    /// Gap records g_n = p_(n+1) - p_n over an index range
    Gaps(GapsArgs),
    /// Scan g_n < Q_n for an auxiliary sequence
    Xi(XiArgs),
    /// Check a bound or classical inequality over a range
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Kummer-test tools
    #[command(subcommand)]
    Kummer(KummerCommand),
    /// Running minima of normalized gap statistics
    Liminf(LiminfArgs),
    /// Iterate the Q-preserving equality recurrence from a seed
    Recurrence(RecurrenceArgs),
    /// Rosser's inequality and PNT checkpoints
    Classical(ClassicalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum FormatArg {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Emit {
    #[default]
    All,
    /// Only rows whose verdict is not `holds`
    Failures,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Record file; `-` writes records to standard output and the summary to standard error
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: FormatArg,
    #[arg(long, value_enum, default_value_t)]
    pub emit: Emit,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Relative half-width of the guard band around float comparisons
    #[arg(long, default_value_t = 1e-9)]
    pub guard_band: f64,
    /// Worker threads (defaults to the available cores)
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Exit with status 3 when more verdicts than this stay indeterminate
    #[arg(long, default_value = "0", value_parser = count)]
    pub max_indet: u64,
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long, value_parser = count)]
    pub limit: u64,
    #[arg(long, value_parser = count)]
    pub segment_size: Option<u64>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    #[arg(long, value_parser = count)]
    pub from: u64,
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["seq", "seq_file", "twin_pairs"])))]
pub struct XiArgs {
    /// Builtin name or expression in n
    #[arg(long)]
    pub seq: Option<String>,
    /// Tabulated sequence, CSV `n,q_n`
    #[arg(long)]
    pub seq_file: Option<PathBuf>,
    /// Emit even members of Ξ(twin_piecewise) with Q_n <= 4 instead of per-index rows
    #[arg(long)]
    pub twin_pairs: bool,
    #[arg(long, default_value = "1", value_parser = count)]
    pub from: u64,
    #[arg(long, value_parser = count)]
    pub to: u64,
    /// Also summarize verdict counts per block of this many indices
    #[arg(long, value_parser = count)]
    pub block: Option<u64>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// p_(n+1)^(1/(n+1)) < p_n^(1/n) for every p_(n+1) below the limit
    Firoozbakht(FiroozbakhtArgs),
    /// n ln n < p_n
    Rosser(RosserArgs),
    /// g_n n < 2 p_n
    TwoOverN(RangeArgs),
    /// g_n < ln(p_n)^2 - ln(p_n) - 1, n >= 10
    Kourbatov(RangeArgs),
    /// g_n < (n+1) ln(n+1) - n ln n + 1
    Sharp(RangeArgs),
    /// Is the sharp bound below ln(p_n)^2 - ln(p_n) - b?
    CompareBounds(CompareArgs),
}

#[derive(Debug, Args)]
pub struct FiroozbakhtArgs {
    #[arg(long, value_parser = count)]
    pub limit: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RosserArgs {
    #[arg(long, value_parser = count)]
    pub to: u64,
    /// Comma-separated checkpoint indices (powers of two by default)
    #[arg(long, value_delimiter = ',', value_parser = count)]
    pub checkpoints: Vec<u64>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, value_parser = count)]
    pub from: Option<u64>,
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value = "10", value_parser = count)]
    pub from: u64,
    #[arg(long, value_parser = count)]
    pub to: u64,
    /// The constant b >= 1 in ln(p)^2 - ln(p) - b
    #[arg(long, default_value = "1")]
    pub b: String,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FramingArg {
    /// The series values are the terms
    Terms,
    /// The terms are the reciprocals of the series values
    Reciprocals,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// reciprocal_primes, harmonic, squares, geometric:<r> (values r^-n), or an expression in n
    #[arg(long)]
    pub series: String,
    /// Defaults to `terms` for geometric series and `reciprocals` otherwise
    #[arg(long, value_enum)]
    pub framing: Option<FramingArg>,
}

#[derive(Debug, Subcommand)]
pub enum KummerCommand {
    /// Check b_n t_n / t_(n+1) - b_(n+1) >= c for n in (n0, to]
    Scan(KummerScanArgs),
    /// First n with b_n a_(n+1) - b_(n+1) a_n < a_n
    Witness(KummerWitnessArgs),
    /// List the canonical multipliers b_n = (M - sum_(j<=n) t_j) / t_n
    Canonical(KummerCanonicalArgs),
}

#[derive(Debug, Args)]
pub struct KummerScanArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Multipliers: builtin name, expression, or `kummer_canonical` (needs --total)
    #[arg(long)]
    pub b: String,
    /// Series sum, for `--b kummer_canonical`
    #[arg(long)]
    pub total: Option<String>,
    #[arg(long, default_value = "1", value_parser = count)]
    pub n0: u64,
    #[arg(long, default_value = "1")]
    pub c: String,
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("multiplier").required(true).args(["b", "b_file", "random_b"])))]
pub struct KummerWitnessArgs {
    /// The a_n (the series is sum 1/a_n); same names as --series
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: Option<String>,
    /// Tabulated multipliers, CSV `n,q_n`
    #[arg(long)]
    pub b_file: Option<PathBuf>,
    /// Try this many seeded random multiplier tables instead
    #[arg(long, value_parser = count)]
    pub random_b: Option<u64>,
    /// Length of each random table
    #[arg(long, default_value = "10000", value_parser = count)]
    pub random_len: u64,
    /// Seed for --random-b
    #[arg(long, default_value_t = crate::DEFAULT_RNG_SEED)]
    pub seed_rng: u64,
    #[arg(long, default_value = "1", value_parser = count)]
    pub from: u64,
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct KummerCanonicalArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// The series sum M, as a decimal
    #[arg(long)]
    pub total: String,
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LiminfArgs {
    /// gap_over_p_scaled, gap_over_log, gap_over_log_eps, gap_over_gpy, firoozbakht_ratio,
    /// reciprocal_prime_partial_sum, xi_n_u, xi_gpy_u
    #[arg(long)]
    pub metric: String,
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[arg(long, default_value_t = gapforge::bounds::liminf::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Sequence for the Ξ metrics
    #[arg(long)]
    pub seq: Option<String>,
    #[arg(long)]
    pub seq_file: Option<PathBuf>,
    /// Comma-separated checkpoint indices (powers of two by default)
    #[arg(long, value_delimiter = ',', value_parser = count)]
    pub checkpoints: Vec<u64>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    /// q_1,q_2 as decimals
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub seed: Vec<String>,
    /// Stop at q_N
    #[arg(long, value_parser = count)]
    pub n: u64,
    #[arg(long, default_value_t = gapforge::recurrence::DEFAULT_BIT_BUDGET, value_parser = count)]
    pub bit_budget: u64,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, value_parser = count)]
    pub to: u64,
    #[arg(long, value_delimiter = ',', value_parser = count)]
    pub checkpoints: Vec<u64>,
    #[command(flatten)]
    pub numeric: NumericArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
