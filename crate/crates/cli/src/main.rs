use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use simapprox::problems::Limits;
use simapprox::{Error, NormKind, ProblemKind, Rat, Route};

mod commands;
mod io;

#[derive(Parser)]
#[command(name = "simapprox", version, about = "Exact SVP, SAP and GDA solvers and the reductions between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded random instances.
    Gen(GenArgs),
    /// Solve instances exactly with the brute-force solvers.
    Solve(SolveArgs),
    /// Run a reduction and write its certificate.
    Reduce(ReduceArgs),
    /// Check solutions against instances, or replay certificates.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Override the norm of every instance.
    #[arg(long, value_parser = parse_norm)]
    norm: Option<NormKind>,
    /// Largest dimension the exact solvers accept.
    #[arg(long, default_value_t = Limits::default().max_dim, value_parser = clap::value_parser!(usize))]
    max_dim: usize,
    /// Largest range scanned one multiplier at a time.
    #[arg(long, default_value_t = Limits::default().max_lcd, value_parser = clap::value_parser!(u64).range(1..))]
    max_lcd: u64,
    /// Lattice points visited per enumeration.
    #[arg(long, default_value_t = Limits::default().max_points, value_parser = clap::value_parser!(u64).range(1..))]
    max_points: u64,
    /// Worker threads for batch files.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Write JSON here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Common {
    fn limits(&self) -> Limits {
        Limits { max_dim: self.max_dim, max_lcd: self.max_lcd, max_points: self.max_points }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_problem)]
    problem: ProblemKind,
    #[arg(long, short = 'n')]
    dim: usize,
    /// Entry bound for SVP, denominator bound for SAP and GDA.
    #[arg(long, default_value_t = 10)]
    bound: u64,
    #[arg(long, value_parser = parse_norm, default_value = "2")]
    norm: NormKind,
    #[arg(long, value_parser = parse_alpha, default_value = "1")]
    alpha: Rat,
    #[arg(long)]
    seed: u64,
    /// Emit a JSON array of this many instances, seeded `seed, seed+1, ...`.
    #[arg(long)]
    count: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// An instance, or a JSON array of instances.
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, value_parser = parse_route)]
    route: Route,
    /// brute or worst
    #[arg(long, default_value = "brute")]
    oracle: String,
    /// Ask the oracle for this smaller gap (SVP routes only).
    #[arg(long, value_parser = parse_alpha)]
    alpha_prime: Option<Rat>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, short, required_unless_present = "certificate")]
    input: Option<PathBuf>,
    /// Output of `solve`, a bare answer, or an array of either.
    #[arg(long, short, required_unless_present = "certificate")]
    solution: Option<PathBuf>,
    /// Replay a certificate and check its output instead.
    #[arg(long, conflicts_with_all = ["input", "solution"])]
    certificate: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    NormKind::parse(s).map_err(|e| e.to_string())
}

fn parse_problem(s: &str) -> Result<ProblemKind, String> {
    ProblemKind::parse(s).map_err(|e| e.to_string())
}

fn parse_route(s: &str) -> Result<Route, String> {
    Route::parse(s).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> Result<Rat, String> {
    simapprox::exactnum::parse_rat(s).map_err(|e| e.to_string())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => 2,
        Some(Error::Precondition(_)) => 3,
        Some(Error::LimitExceeded(_)) => 4,
        Some(Error::Invariant(_) | Error::Replay(_)) => 5,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Reduce(a) => commands::reduce(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
