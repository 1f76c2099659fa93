use crate::{BenchArgs, FitArgs, Inputs, LemmaArgs, PredictArgs, ServeArgs, SimulateArgs, WhatifArgs};
use rld_core::io::{read_fleet, read_json, robot_dir, to_json_string, write_fleet, write_json, write_whatif_csv};
use rld_core::pipeline::{fit_update_points, predict_closed_form, predict_monte_carlo, whatif_table, MonteCarloOptions};
use rld_core::rld::{benchmark, lemma1_check, standard_scenarios, BenchmarkConfig, Lemma1Config};
use rld_core::simulator::UPDATE_FRACTIONS;
use rld_core::{estimate_gamma, simulate_fleet, FleetProfile, PosteriorState, PredictionContext, TaskSeverityModel};
use rld_core::{InspectionLog, WhatIfScenario};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed inputs, inputs the model rejects.
    Invalid(String),
    /// Everything else: failed writes, numerical breakdown, server errors.
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<rld_core::Error> for CliError {
    fn from(e: rld_core::Error) -> Self {
        if e.is_validation() {
            CliError::Invalid(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Any failure to read an input is the caller's problem.
fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    read_json(path).map_err(|e| CliError::Invalid(e.to_string()))
}

fn runtime(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| runtime(parent, e))?;
            }
            fs::write(path, bytes).map_err(|e| runtime(path, e))
        }
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn emit_json<T: Serialize + ?Sized>(out: Option<&Path>, value: &T) -> CliResult {
    emit(out, to_json_string(value)?.as_bytes())
}

struct Loaded {
    model: TaskSeverityModel,
    posterior: PosteriorState,
    context: PredictionContext,
}

impl Loaded {
    fn read(inputs: &Inputs) -> CliResult<Self> {
        let model: TaskSeverityModel = load(&inputs.model)?;
        let posterior: PosteriorState = load(&inputs.posterior)?;
        let context: PredictionContext = load(&inputs.context)?;
        posterior.validate()?;
        if posterior.ctmc_stats.n_states() != model.n_states() {
            return Err(CliError::Invalid(format!(
                "posterior chain statistics cover {} states, the model has {}",
                posterior.ctmc_stats.n_states(),
                model.n_states()
            )));
        }
        model.state_index(&context.state)?;
        Ok(Self { model, posterior, context })
    }

    fn current_state(&self) -> usize {
        self.model.state_index(&self.context.state).expect("checked on load")
    }
}

pub fn parse_pi(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}` in `{raw}`: {e}")))
        .collect()
}

fn check_jobs(jobs: Option<usize>) -> CliResult {
    match jobs {
        Some(0) => Err(CliError::Invalid("--jobs must be at least 1".into())),
        _ => Ok(()),
    }
}

pub fn simulate(args: SimulateArgs) -> CliResult {
    check_jobs(args.jobs)?;
    let model: TaskSeverityModel = load(&args.model)?;
    let profile: FleetProfile = load(&args.fleet)?;
    let runs = rld_core::rng::with_jobs(args.jobs, || simulate_fleet(&profile, &model, args.seed))?;
    write_fleet(&args.out, &profile, &model, &runs)?;
    let failed = runs.iter().filter(|r| r.failed()).count();
    eprintln!("simulated {} robots ({failed} failed) into {}", runs.len(), args.out.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct FitSummary {
    gamma: f64,
    gamma_estimated: bool,
    fractions: Vec<f64>,
    robots: Vec<FitRobot>,
    skipped: Vec<Skipped>,
}

#[derive(Debug, Serialize)]
struct FitRobot {
    robot: usize,
    failure_time: f64,
    epochs: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct Skipped {
    robot: usize,
    reason: String,
}

fn percent(fraction: f64) -> u32 {
    (fraction * 100.0).round() as u32
}

pub fn fit(args: FitArgs) -> CliResult {
    let fleet = read_fleet(&args.fleet).map_err(|e| CliError::Invalid(e.to_string()))?;
    let model = match &args.model {
        Some(path) => load(path)?,
        None => fleet.model.clone(),
    };
    let out = args.out.clone().unwrap_or_else(|| args.fleet.clone());
    let (gamma, gamma_estimated) = match args.gamma {
        Some(g) if g > 0.0 && g.is_finite() => (g, false),
        Some(g) => return Err(CliError::Invalid(format!("--gamma must be positive, got {g}"))),
        None => {
            let logs: Vec<InspectionLog> = fleet.robots.iter().map(|r| r.log.clone()).collect();
            (estimate_gamma(&logs, model.severity())?, true)
        }
    };

    let mut summary = FitSummary {
        gamma,
        gamma_estimated,
        fractions: UPDATE_FRACTIONS.to_vec(),
        robots: Vec::new(),
        skipped: Vec::new(),
    };
    for record in &fleet.robots {
        let robot = record.truth.robot;
        let Some(failure_time) = record.truth.failure_time else {
            summary.skipped.push(Skipped { robot, reason: "did not fail".into() });
            continue;
        };
        let points =
            match fit_update_points(&record.log, failure_time, gamma, fleet.profile.threshold, &model, &UPDATE_FRACTIONS) {
                Ok(points) => points,
                Err(e) if e.is_validation() => {
                    summary.skipped.push(Skipped { robot, reason: e.to_string() });
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
        let dir = robot_dir(&out, robot);
        fs::create_dir_all(&dir).map_err(|e| runtime(&dir, e))?;
        for p in &points {
            let pct = percent(p.fraction);
            write_json(&dir.join(format!("posterior_{pct}.json")), &p.posterior)?;
            write_json(&dir.join(format!("context_{pct}.json")), &p.context)?;
        }
        summary.robots.push(FitRobot { robot, failure_time, epochs: points.iter().map(|p| p.epoch).collect() });
    }
    fs::create_dir_all(&out).map_err(|e| runtime(&out, e))?;
    write_json(&out.join("fit.json"), &summary)?;
    eprintln!(
        "fitted {} robots ({} skipped), gamma = {gamma:.6}{}",
        summary.robots.len(),
        summary.skipped.len(),
        if gamma_estimated { " (estimated)" } else { "" }
    );
    Ok(())
}

pub fn predict(args: PredictArgs) -> CliResult {
    check_jobs(args.jobs)?;
    let inputs = Loaded::read(&args.inputs)?;
    let report = match args.approach {
        1 => predict_closed_form(&inputs.posterior, &inputs.model, &inputs.context)?,
        _ => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::Invalid("--approach 2 requires an explicit --seed".into()))?;
            let opts = MonteCarloOptions { paths: args.paths, horizon: args.horizon, seed, dt: args.dt, jobs: args.jobs };
            predict_monte_carlo(&inputs.posterior, &inputs.model, &inputs.context, &opts)?
        }
    };
    emit_json(args.out.as_deref(), &report)
}

pub fn whatif(args: WhatifArgs) -> CliResult {
    let inputs = Loaded::read(&args.inputs)?;
    let scenarios = if args.pi.is_empty() {
        standard_scenarios()
    } else {
        args.pi.into_iter().map(WhatIfScenario::new).collect::<Result<Vec<_>, _>>()?
    };
    let rows = whatif_table(&inputs.posterior, &inputs.model, &inputs.context, &scenarios)?;
    let mut buf = Vec::new();
    write_whatif_csv(&mut buf, &rows)?;
    emit(args.out.as_deref(), &buf)
}

pub fn lemma_check(args: LemmaArgs) -> CliResult {
    check_jobs(args.jobs)?;
    let inputs = Loaded::read(&args.inputs)?;
    let config = Lemma1Config {
        accuracy: inputs.context.accuracy,
        threshold: inputs.context.threshold,
        current_state: inputs.current_state(),
        paths: args.paths,
        horizon_multiplier: args.horizon,
        seed: args.seed,
        dt: args.dt,
        jobs: args.jobs,
    };
    let report = lemma1_check(&inputs.posterior, &inputs.model, &config)?;
    eprintln!(
        "mean T2 {:.6} vs E[T1] {:.6} (SE {:.6}): {}",
        report.mean_t2,
        report.expected_t1,
        report.standard_error,
        if report.pass { "holds" } else { "violated" }
    );
    emit_json(args.out.as_deref(), &report)
}

pub fn bench(args: BenchArgs) -> CliResult {
    check_jobs(args.jobs)?;
    let inputs = Loaded::read(&args.inputs)?;
    let config = BenchmarkConfig {
        accuracy: inputs.context.accuracy,
        threshold: inputs.context.threshold,
        current_state: inputs.current_state(),
        path_grid: args.paths,
        horizon_multiplier: args.horizon,
        seed: args.seed,
        closed_form_calls: args.calls,
        jobs: args.jobs,
    };
    let report = benchmark(&inputs.posterior, &inputs.model, &config)?;
    for row in &report.rows {
        eprintln!(
            "M={:>7}  closed form {:.3e} s  simulation {:.3e} s  speedup {:.0}x",
            row.paths, row.approach1_seconds, row.approach2_seconds, row.speedup
        );
    }
    emit_json(args.out.as_deref(), &report)
}

pub fn serve(args: ServeArgs) -> CliResult {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .try_init()
        .ok();
    let addr = SocketAddr::new(args.host, args.port);
    let data: Option<PathBuf> = args.data;
    let runtime_ = tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(e.to_string()))?;
    runtime_
        .block_on(rld_api::serve(addr, data))
        .map_err(|e| CliError::Runtime(e.to_string()))
}
