//! `gbcrypt` command-line driver: parameter and sample generation, key
//! recovery, desk-scale experiments and complexity estimates.
//!
//! Every command writes line-delimited JSON records (see [`output`]) and
//! exits with 0 on success, 1 when no solution or check failed, 2 on usage
//! or parse errors and 3 when the budget runs out.

mod commands;
mod files;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    NoSolution(String),
    Budget,
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::NoSolution(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Budget => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::NoSolution(m) => write!(f, "no solution: {m}"),
            CliError::Budget => write!(f, "budget exceeded"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<gbcrypt::Error> for CliError {
    fn from(e: gbcrypt::Error) -> Self {
        use gbcrypt::Error as E;
        match e {
            E::BudgetExceeded => CliError::Budget,
            E::InvalidParams(_) | E::InvalidModulus(_) | E::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::NoSolution(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gbcrypt", version, about = "Groebner-basis cryptanalysis of Ciminion and Hydra")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Run seed; all randomness derives from it.
    #[arg(long, global = true, default_value = "gbcrypt")]
    pub seed: String,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Wall-clock cap for the expensive steps, in milliseconds.
    #[arg(long, global = true)]
    pub budget_ms: Option<u64>,
    /// Add elapsed times to records (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CipherArg {
    Ciminion,
    Hydra,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    Fix,
    Ciminion2,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Ciminion,
    Hydra,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Bariant,
    Eigenvalue,
}

/// Round list written `a`, `a,b,c`, or an inclusive range `a..b` (also `a..=b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundSpec(pub Vec<usize>);

fn parse_rounds(text: &str) -> Result<RoundSpec, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad round count `{s}`"));
    let rounds: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        (num(a)?..=num(b.trim_start_matches('='))?).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if rounds.is_empty() {
        return Err(format!("empty round range `{text}`"));
    }
    Ok(RoundSpec(rounds))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form bit complexities.
    Estimate(EstimateArgs),
    /// Writes a parameter file.
    GenParams(GenParamsArgs),
    /// Draws a key and writes a sample file (with the key in its `secret` table).
    GenSample(GenSampleArgs),
    /// Recovers the key from a parameter and a sample file.
    Attack(AttackArgs),
    /// Desk-scale experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long, value_enum)]
    pub cipher: Option<CipherArg>,
    /// Round count or inclusive range, e.g. `33` or `28..35`.
    #[arg(long, value_parser = parse_rounds, required_unless_present = "min_rounds")]
    pub rounds: Option<RoundSpec>,
    /// Render a table layout instead of records.
    #[arg(long, value_enum)]
    pub table: Option<TableArg>,
    #[arg(long, default_value_t = 2.0)]
    pub omega: f64,
    #[arg(long, default_value = "2^127+45")]
    pub q: String,
    /// Bound on the roots kept per eigenvalue iteration.
    #[arg(long = "n-roots", default_value_t = 1)]
    pub n_roots: u64,
    /// Selects the applicable Ciminion attacks for `--min-rounds`.
    #[arg(long, value_enum, default_value = "standard")]
    pub variant: VariantArg,
    /// Report the least secure round count and the resulting recommendation.
    #[arg(long)]
    pub min_rounds: bool,
    /// Security target in bits.
    #[arg(long, default_value_t = 128.0)]
    pub security: f64,
    /// Treat Boolean Macaulay matrix construction as free.
    #[arg(long)]
    pub free_construction: bool,
}

#[derive(Args, Debug)]
pub struct GenParamsArgs {
    #[arg(long, value_enum)]
    pub cipher: CipherArg,
    #[arg(long, default_value = "7741")]
    pub q: String,
    /// Total rounds `r_C + r_E` for Ciminion, `r_H` for Hydra.
    #[arg(long)]
    pub rounds: usize,
    /// Ciminion rounds `r_E`; `r_C` is the remainder.
    #[arg(long, default_value_t = 1)]
    pub r_e: usize,
    #[arg(long, value_enum, default_value = "standard")]
    pub variant: VariantArg,
}

#[derive(Args, Debug)]
pub struct GenSampleArgs {
    #[arg(long)]
    pub params: PathBuf,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub sample: PathBuf,
    /// Ciminion strategy; defaults to Bariant for the standard cipher.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Roots explored per eigenvalue iteration (all when absent).
    #[arg(long)]
    pub max_branches: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCmd {
    /// Generic-coordinates and affine ranks of the Hydra model.
    RankCheck(RankCheckArgs),
    /// Solving degree of the reduced Hydra system.
    SolveDegree(SolveDegreeArgs),
    /// Buchberger check of the constructed Gröbner bases.
    GbVerify(GbVerifyArgs),
}

#[derive(Args, Debug)]
pub struct RankCheckArgs {
    #[arg(long, value_parser = parse_rounds)]
    pub rounds: RoundSpec,
    #[arg(long, default_value = "7741")]
    pub q: String,
}

#[derive(Args, Debug)]
pub struct SolveDegreeArgs {
    /// The Hydra system (the only one supported).
    #[arg(long, required = true)]
    pub hydra: bool,
    #[arg(long, value_parser = parse_rounds)]
    pub rounds: RoundSpec,
    #[arg(long, default_value = "7741")]
    pub q: String,
    /// Use the Boolean Macaulay matrix over the quadratic basis.
    #[arg(long)]
    pub boolean: bool,
    /// Single elimination per degree instead of closing the row space.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value_t = 8)]
    pub d_max: u32,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["ciminion", "hydra"])))]
pub struct GbVerifyArgs {
    #[arg(long)]
    pub ciminion: bool,
    #[arg(long)]
    pub hydra: bool,
    #[arg(long, value_parser = parse_rounds)]
    pub rounds: RoundSpec,
    #[arg(long, default_value = "7741")]
    pub q: String,
    #[arg(long, value_enum, default_value = "standard")]
    pub variant: VariantArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gbcrypt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
