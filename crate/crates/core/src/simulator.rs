//! Synthetic task planner and run-to-failure fleets.
//!
//! One task is one operational cycle. Robots are inspected after every
//! `cycles_per_epoch` completed tasks; measurement noise is added to the
//! recorded accuracy but never to the underlying degradation.

use crate::bayes::{Inspection, InspectionLog};
use crate::ctmc::{JumpChain, Segment, SeverityPath, TaskSeverityModel};
use crate::degradation::{crossing_time, DegradationModel};
use crate::error::{Error, Result};
use crate::rng::{seeded, substream};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const UPDATE_FRACTIONS: [f64; 4] = [0.3, 0.5, 0.7, 0.9];

/// Normal distribution of a per-robot coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalSpec {
    pub mean: f64,
    #[serde(default)]
    pub sd: f64,
}

impl NormalSpec {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mean + self.sd * z
    }
}

/// How task durations are produced.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TaskMode {
    /// Each task is one exponential holding interval of the chain.
    #[default]
    Ctmc,
    /// Every task lasts `duration` hours; severities follow the jump chain.
    Fixed { duration: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerConfig {
    pub mode: TaskMode,
    /// Caps holding intervals of states without exits.
    pub max_task_duration: f64,
    pub initial_state: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self { mode: TaskMode::Ctmc, max_task_duration: default_max_task_duration(), initial_state: 0 }
    }
}

/// Fleet configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetProfile {
    #[serde(default = "default_robots")]
    pub n_robots: usize,
    pub alpha: NormalSpec,
    pub beta: NormalSpec,
    pub gamma: f64,
    pub threshold: f64,
    #[serde(default)]
    pub initial: f64,
    /// Standard deviation of the accuracy measurement error.
    #[serde(default)]
    pub measurement_noise: f64,
    pub cycles_per_epoch: u64,
    /// Largest degradation sub-step within a task, hours.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub task_mode: TaskMode,
    /// Robots still running after this many tasks are flagged non-failing.
    #[serde(default = "default_max_tasks")]
    pub max_tasks: u64,
    #[serde(default = "default_max_task_duration")]
    pub max_task_duration: f64,
}

fn default_robots() -> usize {
    25
}
fn default_dt() -> f64 {
    0.01
}
fn default_max_tasks() -> u64 {
    1_000_000
}
fn default_max_task_duration() -> f64 {
    1e6
}

impl FleetProfile {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n_robots == 0 {
            return bad("a fleet needs at least one robot".into());
        }
        if !(self.measurement_noise >= 0.0) {
            return bad(format!("measurement noise {} must be non-negative", self.measurement_noise));
        }
        if self.cycles_per_epoch == 0 {
            return bad("cycles per epoch must be at least 1".into());
        }
        if !(self.dt > 0.0) {
            return bad(format!("step {} must be positive", self.dt));
        }
        if self.alpha.sd < 0.0 || self.beta.sd < 0.0 {
            return bad("coefficient spreads must be non-negative".into());
        }
        if let TaskMode::Fixed { duration } = self.task_mode {
            if !(duration > 0.0) {
                return bad(format!("fixed task duration {duration} must be positive"));
            }
        }
        if !(self.max_task_duration > 0.0) {
            return bad("max task duration must be positive".into());
        }
        DegradationModel::new(self.alpha.mean, self.beta.mean, self.gamma, self.threshold, self.initial)?;
        Ok(())
    }
}

/// Emits tasks one at a time.
#[derive(Debug, Clone)]
pub struct TaskPlanner<'a> {
    chain: &'a JumpChain,
    config: PlannerConfig,
    state: usize,
    time: f64,
    started: bool,
}

impl<'a> TaskPlanner<'a> {
    pub fn new(chain: &'a JumpChain, config: PlannerConfig) -> Self {
        Self { chain, config, state: config.initial_state, time: 0.0, started: false }
    }

    pub fn next_task<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Segment {
        if self.started && self.chain.exit_rates()[self.state] > 0.0 {
            self.state = self.chain.next_state(self.state, rng);
        }
        self.started = true;
        let duration = match self.config.mode {
            TaskMode::Ctmc => self.chain.holding_time(self.state, rng).min(self.config.max_task_duration),
            TaskMode::Fixed { duration } => duration,
        };
        let seg = Segment { state: self.state, start: self.time, end: self.time + duration };
        self.time = seg.end;
        seg
    }
}

/// `n_tasks` consecutive tasks; each segment of the returned path is one task.
pub fn simulate_task_planner(model: &TaskSeverityModel, n_tasks: usize, seed: u64) -> Result<SeverityPath> {
    simulate_task_planner_with(model, n_tasks, seed, &PlannerConfig::default())
}

pub fn simulate_task_planner_with(
    model: &TaskSeverityModel,
    n_tasks: usize,
    seed: u64,
    config: &PlannerConfig,
) -> Result<SeverityPath> {
    if n_tasks == 0 {
        return Err(Error::InvalidParameter("at least one task is required".into()));
    }
    if config.initial_state >= model.n_states() {
        return Err(Error::UnknownState(config.initial_state.to_string()));
    }
    let chain = model.jump_chain();
    let mut planner = TaskPlanner::new(&chain, *config);
    let mut rng = seeded(seed);
    SeverityPath::new((0..n_tasks).map(|_| planner.next_task(&mut rng)).collect())
}

/// Ground truth and observations of one simulated robot.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotRun {
    pub index: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Realized lifetime `L_f`; `None` for robots that never failed.
    pub failure_time: Option<f64>,
    pub tasks_completed: u64,
    /// Inspections up to the last one before failure.
    pub log: InspectionLog,
    /// Noise-free accuracy at each inspection.
    pub true_accuracy: Vec<f64>,
}

impl RobotRun {
    pub fn failed(&self) -> bool {
        self.failure_time.is_some()
    }
}

pub fn simulate_fleet(profile: &FleetProfile, model: &TaskSeverityModel, seed: u64) -> Result<Vec<RobotRun>> {
    profile.validate()?;
    let pi = model.stationary_distribution()?;
    let chain = model.jump_chain();
    (0..profile.n_robots)
        .into_par_iter()
        .map(|r| simulate_robot(profile, model, &chain, pi.probabilities(), seed, r))
        .collect()
}

fn simulate_robot(
    profile: &FleetProfile,
    model: &TaskSeverityModel,
    chain: &JumpChain,
    pi: &[f64],
    seed: u64,
    index: usize,
) -> Result<RobotRun> {
    let mut rng = substream(seed, index as u64);
    let alpha = profile.alpha.sample(&mut rng);
    let beta = profile.beta.sample(&mut rng);
    let degradation = DegradationModel::new(alpha, beta, profile.gamma, profile.threshold, profile.initial)?;

    let u: f64 = rng.random();
    let mut acc = 0.0;
    let initial_state = pi.iter().position(|p| {
        acc += p;
        u < acc
    });
    let config = PlannerConfig {
        mode: profile.task_mode,
        max_task_duration: profile.max_task_duration,
        initial_state: initial_state.unwrap_or(pi.len() - 1),
    };
    let mut planner = TaskPlanner::new(chain, config);
    let severity = model.severity();

    let mut epochs = vec![Inspection { epoch: 0, cycles: 0, time: 0.0, accuracy: profile.initial }];
    let mut true_accuracy = vec![profile.initial];
    let mut history = SeverityPath::default();
    let (mut t, mut a) = (0.0, profile.initial);
    let mut failure_time = None;
    let mut tasks_completed = 0u64;

    'tasks: for task in 1..=profile.max_tasks {
        let seg = planner.next_task(&mut rng);
        let substeps = (seg.duration() / profile.dt).ceil().max(1.0) as u64;
        let h = seg.duration() / substeps as f64;
        let psi = severity[seg.state];
        for j in 1..=substeps {
            let t_next = if j == substeps { seg.end } else { seg.start + j as f64 * h };
            let step = t_next - t;
            let a_next = a + degradation.increment(psi * step, step, &mut rng);
            if a_next >= profile.threshold {
                failure_time = Some(crossing_time(t, a, t_next, a_next, profile.threshold));
                break 'tasks;
            }
            t = t_next;
            a = a_next;
        }
        history.push_unchecked(seg);
        tasks_completed = task;
        if task % profile.cycles_per_epoch == 0 {
            let noise = if profile.measurement_noise > 0.0 {
                let z: f64 = rng.sample(StandardNormal);
                profile.measurement_noise * z
            } else {
                0.0
            };
            epochs.push(Inspection {
                epoch: epochs.len(),
                cycles: task,
                time: seg.end,
                accuracy: a + noise,
            });
            true_accuracy.push(a);
        }
    }

    let last_time = epochs.last().map_or(0.0, |e| e.time);
    let log = InspectionLog::new(epochs, history.truncated(last_time), profile.cycles_per_epoch)?;
    Ok(RobotRun { index, alpha, beta, failure_time, tasks_completed, log, true_accuracy })
}

/// Inspection indices nearest from below to each fraction of `L_f`.
pub fn update_schedule(log: &InspectionLog, failure_time: f64, fractions: &[f64]) -> Result<Vec<usize>> {
    fractions
        .iter()
        .map(|&f| {
            let target = f * failure_time;
            let tol = 1e-9 * target.abs().max(1.0);
            let idx = log.epochs.partition_point(|e| e.time <= target + tol);
            if idx <= 1 {
                Err(Error::BeforeFirstEpoch { fraction: f })
            } else {
                Ok(idx - 1)
            }
        })
        .collect()
}
