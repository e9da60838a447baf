//! `verlinde`: dimensions of generalized theta functions from the command line.
//!
//! Exit codes: 0 success, 1 a verification residual, 2 bad input, 3 internal failure.

mod cache;
mod commands;
mod document;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::document::DocumentError;

#[derive(Parser, Debug)]
#[command(name = "verlinde", version, about = "Exact Verlinde-formula dimensions and cross-checks")]
struct Cli {
    /// Print line-structured key=value output instead of prose.
    #[arg(long, global = true)]
    machine: bool,

    /// Worker threads for grid computations (defaults to all cores).
    #[arg(long, global = true, env = "VERLINDE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate D_g(r, d, ω) for one query document.
    Dim(commands::DimArgs),
    /// Run a verification suite over a bounded grid or one document.
    Verify(verify::VerifyArgs),
    /// List one of the index sets P_k, W_k, W'_k, Q_k or the v-vectors.
    Enumerate(commands::EnumerateArgs),
    /// Tabulate D over ranges of g, r, k, d as CSV or JSON lines.
    Table(commands::TableArgs),
    /// Apply a Hecke transformation to a document.
    Hecke(commands::HeckeArgs),
}

/// A failed command and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::input(format!("invalid document: {e}"))
    }
}

impl From<verlinde::Error> for Failure {
    fn from(e: verlinde::Error) -> Self {
        use verlinde::Error::*;
        match e {
            InvalidData { .. }
            | UnknownLabel(_)
            | InvalidHecke { .. }
            | DegeneratePair { .. }
            | SizeGuard { .. }
            | NonIntegralDegree(_)
            | NotInWPrime(_)
            | InvalidSplit(_)
            | Precondition(_) => Failure::input(e.to_string()),
            _ => Failure::internal(e.to_string()),
        }
    }
}

pub type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: the thread count must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start the thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    let out = match &cli.command {
        Command::Dim(a) => commands::dim(a, cli.machine),
        Command::Verify(a) => verify::run(a, cli.machine),
        Command::Enumerate(a) => commands::enumerate(a, cli.machine),
        Command::Table(a) => commands::table(a),
        Command::Hecke(a) => commands::hecke(a, cli.machine),
    };
    match out {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
