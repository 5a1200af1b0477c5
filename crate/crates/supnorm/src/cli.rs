//! Command-line arguments. The parsed structure doubles as the run config
//! embedded in every report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "supnorm", version, about = "Hecke algebra, amplifier and lattice-count computations")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// CSV is available for the ladder experiments (lem2, count corollary, count scaling).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    pub timing: bool,

    /// Largest coset enumeration allowed.
    #[arg(long, global = true, env = "SUPNORM_BUDGET", default_value_t = 1_000_000)]
    pub budget: u64,

    /// Largest number of search-tree nodes for lattice enumeration.
    #[arg(long, global = true, default_value_t = 1 << 32)]
    pub node_budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Satake image of T_a(p) in the monomial symmetric basis.
    Satake(GeneratorArgs),
    /// Structure constants of T_a·T_b by the Satake route and the coset oracle.
    Multiply(MultiplyArgs),
    /// Degree and right coset representatives of T_a(p).
    Cosets(CosetArgs),
    /// Amplifier coefficients y_a and the identity check.
    Amplifier(RankPrime),
    /// Row/co-row products T_(j..j,0)·T_(j,0..0) over a prime ladder.
    Lem2(Lem2Args),
    /// Lattice point experiments.
    Count(CountArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Satake(_) => "satake",
            Command::Multiply(_) => "multiply",
            Command::Cosets(_) => "cosets",
            Command::Amplifier(_) => "amplifier",
            Command::Lem2(_) => "lem2",
            Command::Count(_) => "count",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RankPrime {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GeneratorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub rp: RankPrime,
    /// Non-increasing exponents, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct MultiplyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub rp: RankPrime,
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub b: Vec<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct CosetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub generator: GeneratorArgs,
    /// Report the degree only.
    #[arg(long)]
    pub no_reps: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Lem2Args {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub j: u32,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    pub primes: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// Integer points near a binary quadratic curve.
    Lembp,
    /// Planted-solution ladder for a quadratic and k linear conditions.
    Corollary,
    /// Matrices of given determinant and second divisor close to the isometries of Q.
    Sdelta,
    /// S_delta counts at m = p^{4ν}, l = p^ν across primes (n = 4).
    Scaling,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    pub mode: CountMode,
    #[arg(long)]
    pub n: Option<usize>,
    /// `identity`, `file:PATH` (JSON `{"num": [[..]], "den": d}`) or `seed:N`.
    #[arg(long, default_value = "identity")]
    pub q: String,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Coefficients a,b,c,d,e,f of ax² + bxy + cy² + dx + ey + f.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub min_disc: f64,
    /// Number of linear conditions.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40")]
    pub x: Vec<i64>,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub nu: u32,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    pub primes: Vec<u64>,
    /// Omit witness matrices and points from the report.
    #[arg(long)]
    pub no_witnesses: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Run every check at acceptance size.
    #[arg(long)]
    pub full: bool,
    /// Restrict to these criteria (1-10).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<u8>>,
}
