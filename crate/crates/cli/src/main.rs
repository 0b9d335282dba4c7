//! `twins`: solve, enumerate, construct, simulate and tabulate twins in words.
//!
//! Exit codes: 0 success, 1 invalid witness, 2 usage or parse error,
//! 3 work budget exceeded.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twins_core::Error;

#[derive(Parser, Debug)]
#[command(name = "twins", version, about = "Disjoint identical subsequences in words")]
struct Cli {
    /// seed for every random choice
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// worker threads (TWINS_THREADS overrides; default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// directory for report files
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// format of the report printed on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Longest r-twins of one word
    Solve(SolveArgs),
    /// Distribution of longest-twin lengths over all words of length s
    Enumerate(EnumerateArgs),
    /// Monte Carlo experiment described by a JSON config
    Simulate(SimulateArgs),
    /// Build twins with one of the constructions
    Construct(ConstructArgs),
    /// Bound coefficients
    Bounds(BoundsArgs),
    /// Check a witness against a word
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct WordInput {
    /// the word: letters a-z, or comma-separated integers
    #[arg(long, conflicts_with = "file")]
    word: Option<String>,
    /// file holding the word
    #[arg(long)]
    file: Option<PathBuf>,
    /// alphabet size (default: largest letter + 1)
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    input: WordInput,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, value_enum, default_value_t = Mode::Fast)]
    mode: Mode,
    /// partition checks the oracle may spend
    #[arg(long, default_value_t = twins_core::solver::DEFAULT_ORACLE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// exhaustive search
    Oracle,
    /// pruned search, canonical witness
    Fast,
    /// pruned search, first optimal witness found
    Quick,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: usize,
    /// allow runs beyond the default word budget
    #[arg(long)]
    extended: bool,
    /// resume from and save progress to this file
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// solve every word instead of one per symmetry class
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// experiment config (JSON)
    config: PathBuf,
    /// also write an SVG histogram here
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Segment,
    Interlace,
    Boost,
    Pipeline,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    method: Method,
    #[command(flatten)]
    input: WordInput,
    /// use a random binomial word of this length instead (needs --k)
    #[arg(long, conflicts_with_all = ["word", "file"])]
    random: Option<usize>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// segment length (segment; pipeline base)
    #[arg(long)]
    s: Option<usize>,
    /// segment count (interlace; pipeline base)
    #[arg(long)]
    m: Option<usize>,
    /// base witness on the word without its highest letter (boost)
    #[arg(long)]
    witness: Option<PathBuf>,
    /// alphabet the pipeline starts from
    #[arg(long, default_value_t = 2)]
    k_start: usize,
    /// pipeline base: segment, segment-count or interlace
    #[arg(long, default_value = "segment-count")]
    base: String,
    #[arg(long, value_enum, default_value_t = Mode::Fast)]
    mode: Mode,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// print a whole comparison table (1 or 2)
    #[arg(long, conflicts_with = "name")]
    table: Option<u8>,
    /// bz1, bz2, thm12, bzr or pi
    #[arg(long)]
    name: Option<String>,
    /// alphabet size (may exceed 64 bits)
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    /// largest k where NAME is at least this other bound
    #[arg(long, requires = "name")]
    crossover: Option<String>,
    /// scan limit for --crossover
    #[arg(long, default_value_t = 1_000_000_000_000)]
    limit: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    input: WordInput,
    /// witness JSON: {"r": 2, "indexSets": [[...], [...]]}
    #[arg(long)]
    witness: PathBuf,
}

/// Failure with a fixed exit status.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded { .. } => 3,
            Error::Trial { source, .. } if matches!(**source, Error::BudgetExceeded { .. }) => 3,
            Error::InvalidWitness(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Exit {
    fn from(e: serde_json::Error) -> Self {
        Exit::usage(format!("invalid JSON: {e}"))
    }
}

fn workers(flag: Option<usize>) -> usize {
    std::env::var("TWINS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .or(flag)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        seed: cli.seed,
        workers: workers(cli.workers),
        out_dir: cli.out_dir,
        json: cli.format == Format::Json,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(ctx.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = pool.install(|| match cli.command {
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Enumerate(a) => commands::enumerate(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Construct(a) => commands::construct(&ctx, a),
        Command::Bounds(a) => commands::bounds(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
