//! `crowell`: Crowell state spaces of alternating knot diagrams from the
//! command line.
//!
//! Exit codes: 0 success, 1 diagram rejected, 2 a structural check failed,
//! 3 I/O, parse or usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "crowell",
    version,
    about = "State spaces, Alexander polynomials and exchange moves of alternating knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a diagram and report whether it is reduced, prime and alternating.
    Validate(Common),
    /// Print the weighted directed graph of the diagram.
    Graph(Common),
    /// List all states for the chosen root.
    States(Common),
    /// Compute the normalized Alexander polynomial as a state sum.
    Alexander(Common),
    /// Build the graph of terminal edge exchanges between states.
    ExchangeGraph(Common),
    /// Find exchanges turning one state into another.
    Transform(TransformArgs),
    /// Decide whether the polynomial is a (2, 2n+1) torus polynomial and check the structure.
    Torus(Common),
    /// Run every check on every knot of a table.
    VerifyAll(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Inline PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".
    #[arg(long, group = "source")]
    pd: Option<String>,
    /// Knot name looked up in the table.
    #[arg(long, group = "source")]
    knot: Option<String>,
    /// File containing a PD code.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Knot table for --knot (defaults to $CROWELL_TABLE, then the bundled table).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Root vertex (crossing id).
    #[arg(long, default_value_t = 1)]
    root: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct TransformArgs {
    #[command(flatten)]
    common: Common,
    /// Index of the start state; random when omitted.
    #[arg(long)]
    from: Option<usize>,
    /// Index of the target state; random when omitted.
    #[arg(long)]
    to: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random state pairs per knot for the transform check.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(fail) => {
            print!("{}", fail.output);
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}
