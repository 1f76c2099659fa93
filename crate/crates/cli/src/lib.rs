//! The `rld` command line: simulate fleets, fit posteriors, predict remaining
//! lifetimes, and serve them over HTTP.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::ffi::OsString;

#[derive(Debug, Parser)]
#[command(name = "rld", version, about = "Remaining-lifetime prediction for task-driven robot degradation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a run-to-failure fleet into one directory per robot.
    Simulate(SimulateArgs),
    /// Fit posteriors at 30/50/70/90% of each robot's lifetime.
    Fit(FitArgs),
    /// Predict the remaining lifetime distribution.
    Predict(PredictArgs),
    /// Closed-form medians under hypothesized task mixes.
    Whatif(WhatifArgs),
    /// Check that the closed form lower-bounds the simulated mean lifetime.
    LemmaCheck(LemmaArgs),
    /// Time the closed form against simulation over a grid of path counts.
    Bench(BenchArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Task-severity model (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Fleet profile (JSON).
    #[arg(long)]
    fleet: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Directory written by `simulate`.
    #[arg(long)]
    fleet: PathBuf,
    /// Overrides the model stored with the fleet.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Output directory; defaults to the fleet directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Known diffusion; estimated from all logs when omitted.
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Debug, Args)]
struct Inputs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    posterior: PathBuf,
    /// Prediction context (JSON): accuracy, threshold, state, cycles per epoch.
    #[arg(long)]
    context: PathBuf,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    approach: u8,
    /// Monte-Carlo paths.
    #[arg(long = "M", default_value_t = 10_000)]
    paths: usize,
    /// Monte-Carlo horizon in hours; defaults to 50 expected lifetimes.
    #[arg(long)]
    horizon: Option<f64>,
    /// Required for approach 2.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WhatifArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Task mix `p1,p2,...`; repeatable. Defaults to the five-point grid.
    #[arg(long = "pi", value_parser = commands::parse_pi)]
    pi: Vec<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LemmaArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long = "M", default_value_t = 5000)]
    paths: usize,
    /// Horizon as a multiple of the closed-form expected lifetime.
    #[arg(long, default_value_t = 50.0)]
    horizon: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Path counts to time; repeatable.
    #[arg(long = "M", default_values_t = [1000, 3000, 10_000])]
    paths: Vec<usize>,
    /// Horizon as a multiple of the closed-form expected lifetime.
    #[arg(long, default_value_t = 50.0)]
    horizon: f64,
    #[arg(long)]
    seed: u64,
    /// Closed-form evaluations per timing batch.
    #[arg(long, default_value_t = 2000)]
    calls: usize,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Directory for the per-robot event logs; in-memory when omitted.
    #[arg(long)]
    data: Option<PathBuf>,
}

/// Runs one invocation. `args` includes the program name. Returns the exit
/// status: 0 on success, 1 on invalid input, 2 on runtime failure.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Fit(a) => commands::fit(a),
        Command::Predict(a) => commands::predict(a),
        Command::Whatif(a) => commands::whatif(a),
        Command::LemmaCheck(a) => commands::lemma_check(a),
        Command::Bench(a) => commands::bench(a),
        Command::Serve(a) => commands::serve(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
