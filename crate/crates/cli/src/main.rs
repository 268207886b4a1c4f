//! `sympsim`: run circuits on the complex and real-symplectic backends,
//! integrate quadratic Hamiltonians, self-verify, and benchmark.
//!
//! Exit codes: 0 success, 1 bad input (usage, unreadable or unparsable
//! files, invalid parameters), 2 runtime failure, 3 verification failure.

mod bench;
mod evolve;
mod failure;
mod output;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "sympsim", version, about = "Dual complex / real-symplectic circuit simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute a circuit file and sample measurement counts.
    Run(RunArgs),
    /// Integrate a quadratic Hamiltonian from a JSON problem file.
    Evolve(EvolveArgs),
    /// Run the randomized property battery.
    Verify(VerifyArgs),
    /// Time both backends over a (qubits, depth) grid; CSV by default.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Complex,
    Real,
    Both,
}

impl Backend {
    pub fn includes_complex(self) -> bool {
        matches!(self, Backend::Complex | Backend::Both)
    }

    pub fn includes_real(self) -> bool {
        matches!(self, Backend::Real | Backend::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Midpoint,
    Strang,
}

impl From<MethodArg> for sympsim_core::dynamics::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Midpoint => Self::ImplicitMidpoint,
            MethodArg::Strang => Self::StrangSplitting,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// RNG seed; SYMPSIM_SEED replaces the default when the flag is absent.
    #[arg(long, env = "SYMPSIM_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Circuit file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Backend::Both)]
    pub backend: Backend,
    /// Measurement shots; 0 skips sampling.
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Include the final state in the output.
    #[arg(long)]
    pub emit_state: bool,
    /// Initial state, JSON {"re", "im"} or {"q", "p"}; default |0...0>.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Evolution problem file (JSON).
    pub input: PathBuf,
    /// Overrides the step size in the file.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Overrides the method in the file.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub seed: SeedArg,
    /// Largest deviation accepted for every property.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Random instances per property and dimension.
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = Backend::Both)]
    pub backend: Backend,
    /// Qubit counts to time.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 6])]
    pub qubits: Vec<usize>,
    /// Circuit depths to time.
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 100])]
    pub depths: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub warmup: usize,
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub out: OutFormat,
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => run::cmd_run(&args),
        Command::Evolve(args) => evolve::cmd_evolve(&args),
        Command::Verify(args) => verify::cmd_verify(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { failure::INPUT } else { 0 };
            // help and version go to stdout, usage errors to stderr
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sympsim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
