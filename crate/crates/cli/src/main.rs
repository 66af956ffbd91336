use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod output;
mod setup;

use commands::{Outcome, SampleArgs};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "interlink", version, about = "Quantum predictions for interlinked contexts on entangled singlets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// ks-collinear, ks-mixed, dim4-collinear-C, dim4-collinear-Cprime,
    /// dim4-mixed or custom
    #[arg(long, default_value = "ks-mixed")]
    scenario: String,

    /// Left eigenvalues, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    left: Option<Vec<f64>>,

    /// Right eigenvalues, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    right: Option<Vec<f64>>,

    /// JSON configuration for --scenario custom
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output file for the JSON document (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Support tolerance (joint) or ray tolerance (states, sequential)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Tr{ρ(A⊗B)} next to its closed form
    Expectation(Common),
    /// Joint outcome table with marginals, uniqueness and criterion reports
    Joint(Common),
    /// Seeded simulated shots
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        /// Parallel streams; 1 reproduces the single-stream run
        #[arg(long, default_value_t = 1)]
        batches: u64,
        /// CSV file for the shot records
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Two-valued states on the diagram of the two contexts
    States {
        #[command(flatten)]
        common: Common,
        /// Diagram in the JSON exchange format; overrides --scenario
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Prepare a ray of the left context and measure it in the right one
    Sequential {
        #[command(flatten)]
        common: Common,
        /// Slot of the left context to prepare
        #[arg(long, default_value_t = 0)]
        prepare: usize,
    },
}

impl Common {
    fn setup(&self) -> CliResult<setup::Setup> {
        if let Some(t) = self.tol.filter(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(CliError::Validation(format!("--tol must be positive, got {t}")));
        }
        setup::build(&self.scenario, self.left.clone(), self.right.clone(), self.config.as_deref())
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let (outcome, out): (Outcome, _) = match &cli.command {
        Command::Expectation(c) => (commands::expectation_cmd(&c.setup()?)?, &c.out),
        Command::Joint(c) => (commands::joint_cmd(&c.setup()?, c.tol)?, &c.out),
        Command::Sample { common, seed, shots, batches, csv } => {
            let args = SampleArgs { seed: *seed, shots: *shots, batches: *batches, csv: csv.as_deref() };
            (commands::sample_cmd(&common.setup()?, &args)?, &common.out)
        }
        Command::States { common, diagram } => {
            let s = if diagram.is_none() { Some(common.setup()?) } else { None };
            (commands::states_cmd(s.as_ref(), diagram.as_deref(), common.tol)?, &common.out)
        }
        Command::Sequential { common, prepare } => {
            (commands::sequential_cmd(&common.setup()?, *prepare, common.tol)?, &common.out)
        }
    };
    output::emit(outcome.doc, out.as_deref())?;
    match outcome.failure {
        Some(msg) => Err(CliError::Consistency(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
