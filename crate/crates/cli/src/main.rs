use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod commands;
mod selftest;
mod table1;

#[derive(Parser, Debug)]
#[command(name = "extdiam", version, about = "Exact searches for long layered graphs of given minimum degree")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Leave out the `run` object (wall time, threads) so reports can be compared byte for byte.
    #[arg(long, global = true)]
    no_run_info: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best repeatable K4-free layered graph over explicit layer graphs.
    SearchOmega(SearchOmegaArgs),
    /// Best repeatable 3-colorable clump graph over color-count columns.
    SearchChi(SearchChiArgs),
    /// Feasibility and ratio of a matrix file.
    VerifyBlock(VerifyBlockArgs),
    /// Concatenate a block and optionally cap its ends.
    Build(BuildArgs),
    /// Order, diameter, minimum degree and constraint check of a graph file.
    Verify(VerifyArgs),
    /// Recompute the known values and compare.
    ReproduceTable1(Table1Args),
    /// Run the brute-force cross-checks.
    Selftest,
}

#[derive(Args, Debug)]
pub struct SearchOmegaArgs {
    #[arg(long)]
    pub delta: u32,
    #[arg(long, default_value_t = 18)]
    pub max_period: usize,
    #[arg(long)]
    pub max_layer_size: Option<usize>,
    /// none, delta5 or delta6
    #[arg(long, default_value = "none")]
    pub profile: String,
}

#[derive(Args, Debug)]
pub struct SearchChiArgs {
    #[arg(long)]
    pub delta: u32,
    #[arg(long, default_value_t = 40)]
    pub max_period: usize,
    #[arg(long)]
    pub max_column_sum: Option<u32>,
    #[arg(long)]
    pub max_class_size: Option<u32>,
    #[arg(long)]
    pub assume_missing_color: bool,
    #[arg(long)]
    pub require_singleton_layer: bool,
    #[arg(long, default_value_t = 3)]
    pub chi: usize,
    /// Needed for delta above 8, where runs can take hours.
    #[arg(long)]
    pub allow_slow: bool,
}

#[derive(Args, Debug)]
pub struct VerifyBlockArgs {
    #[arg(long)]
    pub block: PathBuf,
    #[arg(long)]
    pub delta: u32,
    /// Also compare the ratio with this fraction.
    #[arg(long)]
    pub compare: Option<String>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Matrix file or layered graph file.
    #[arg(long)]
    pub block: PathBuf,
    #[arg(long)]
    pub reps: usize,
    #[arg(long)]
    pub delta: u32,
    #[arg(long)]
    pub cap: bool,
    /// graph6, edges or layered
    #[arg(long, default_value = "graph6")]
    pub format: String,
    /// Write the graph here instead of standard output; the report then goes to standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// graph6, edge list or layered graph file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub delta: u32,
    /// omega or chi
    #[arg(long, default_value = "omega")]
    pub mode: String,
}

#[derive(Args, Debug)]
pub struct Table1Args {
    /// Include the long conditional run for delta 16.
    #[arg(long)]
    pub include_slow: bool,
}

/// Result of a subcommand before it is wrapped into a report.
pub struct Outcome {
    pub config: Value,
    pub result: Value,
    pub conditional: Vec<String>,
    pub exit: u8,
    /// Written to standard output in place of the report.
    pub payload: Option<String>,
}

const NO_WITNESS: u8 = 2;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::SearchOmega(_) => "search-omega",
        Command::SearchChi(_) => "search-chi",
        Command::VerifyBlock(_) => "verify-block",
        Command::Build(_) => "build",
        Command::Verify(_) => "verify",
        Command::ReproduceTable1(_) => "reproduce-table1",
        Command::Selftest => "selftest",
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::SearchOmega(a) => commands::search_omega(a),
        Command::SearchChi(a) => commands::search_chi(a),
        Command::VerifyBlock(a) => commands::verify_block(a),
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::ReproduceTable1(a) => table1::run(a),
        Command::Selftest => selftest::run(),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let threads = match cli.threads {
        Some(0) => bail!("--threads must be positive"),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().context("starting worker pool")?;
    let start = Instant::now();
    let outcome = pool.install(|| dispatch(&cli.command))?;
    let mut report = json!({
        "schema": "1",
        "command": command_name(&cli.command),
        "config": outcome.config,
        "result": outcome.result,
        "conditional": outcome.conditional,
    });
    if !cli.no_run_info {
        report["run"] = json!({
            "wall_time_ms": start.elapsed().as_millis() as u64,
            "threads": threads,
        });
    }
    let text = serde_json::to_string_pretty(&report)?;
    // a graph on standard output pushes the report to standard error
    match &outcome.payload {
        Some(p) => {
            print!("{p}");
            eprintln!("{text}");
        }
        None => println!("{text}"),
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
