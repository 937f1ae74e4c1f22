//! `knotrep`: Alexander data, metabelian representations, cohomology and
//! deformations for a knot group presentation.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{run, Command, Options};

#[derive(Parser)]
#[command(name = "knotrep", version, about = "Nonabelian representations of knot groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alexander polynomial, torsion decomposition, hypothesis table.
    Analyze(Common),
    /// Exact metabelian representation into SL(n).
    Build(Common),
    /// Cohomology dimensions at the metabelian representation.
    Cohomology(Common),
    /// Numerical deformation to irreducible representations.
    Deform(Common),
}

#[derive(Args)]
struct Common {
    /// Presentation file (JSON).
    file: PathBuf,
    /// Representation size.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Index into the torsion factors (default: first admissible one).
    #[arg(long)]
    factor: Option<usize>,
    /// Index of the complex embedding used for the float paths.
    #[arg(long, default_value_t = 0)]
    lambda_branch: usize,
    /// Single deformation parameter instead of the default ladder.
    #[arg(long)]
    t: Option<f64>,
    /// Seed for the randomized commutator test.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sweep every branch of the number tower and every embedding.
    #[arg(long)]
    all_branches: bool,
    /// Human-readable text instead of JSON.
    #[arg(long)]
    pretty: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, c) = match cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::Build(c) => (Command::Build, c),
        Cmd::Cohomology(c) => (Command::Cohomology, c),
        Cmd::Deform(c) => (Command::Deform, c),
    };
    let opts = Options {
        command,
        file: c.file,
        n: c.n,
        factor: c.factor,
        lambda_branch: c.lambda_branch,
        t: c.t,
        seed: c.seed,
        all_branches: c.all_branches,
    };
    let report = run(&opts);
    if c.pretty {
        print!("{}", report.to_text());
    } else {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    }
    if let Some(msg) = &report.message {
        eprintln!("knotrep: {msg}");
    }
    ExitCode::from(report.exit_code())
}
