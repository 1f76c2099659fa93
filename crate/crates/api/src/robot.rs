//! Per-robot records and the events that build them.

use crate::error::ApiError;
use rld_core::pipeline::PredictionContext;
use rld_core::{
    update_posterior, Inspection, InspectionLog, PosteriorState, Segment, SeverityPath, TaskSeverityModel,
    TransitionStats,
};
use serde::{Deserialize, Serialize};

/// Failure threshold, diffusion and inspection spacing of one robot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotConfig {
    pub threshold: f64,
    pub gamma: f64,
    pub cycles_per_epoch: u64,
    /// Accuracy recorded by the epoch-0 inspection at time 0.
    #[serde(default)]
    pub initial_accuracy: f64,
    /// Task state in force at time 0; defaults to the model's first state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<String>,
}

fn default_ctmc_hours() -> f64 {
    100.0
}

/// Gaussian prior on the drift coefficients; chain rates get pseudo-data
/// worth `ctmc_hours` of operation under the registered model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSpec {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
    #[serde(default = "default_ctmc_hours")]
    pub ctmc_hours: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Registration {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub model: TaskSeverityModel,
    pub config: RobotConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<PriorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRecord {
    pub state: String,
    pub start: f64,
    pub end: f64,
}

/// New inspections plus the tasks run since the previous one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InspectionBatch {
    pub inspections: Vec<Inspection>,
    #[serde(default)]
    pub tasks: Vec<TaskRecord>,
}

/// One line of a robot's event log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Registered(Registration),
    Inspections(InspectionBatch),
}

#[derive(Debug, Clone)]
pub struct Robot {
    pub id: String,
    pub model: TaskSeverityModel,
    pub config: RobotConfig,
    initial_state: usize,
    prior: PosteriorState,
    log: InspectionLog,
    posterior: PosteriorState,
}

pub fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl Robot {
    pub fn register(id: String, reg: &Registration) -> Result<Self, ApiError> {
        if !valid_id(&id) {
            return Err(ApiError::Unprocessable(format!("robot id `{id}` must be 1-64 characters of [A-Za-z0-9_-]")));
        }
        let model = reg.model.clone();
        let config = reg.config.clone();
        if config.threshold.partial_cmp(&config.initial_accuracy) != Some(std::cmp::Ordering::Greater) {
            return Err(ApiError::Unprocessable("threshold must exceed the initial accuracy".into()));
        }
        let initial_state = match &config.initial_state {
            Some(name) => model.state_index(name)?,
            None => 0,
        };
        let prior = match &reg.prior {
            Some(p) => PosteriorState::new(p.mean, p.cov, config.gamma, TransitionStats::from_model(&model, p.ctmc_hours)?)?,
            None => PosteriorState::diffuse(config.gamma, TransitionStats::from_model(&model, default_ctmc_hours())?)?,
        };
        let epoch0 = Inspection { epoch: 0, cycles: 0, time: 0.0, accuracy: config.initial_accuracy };
        let log = InspectionLog::new(vec![epoch0], SeverityPath::default(), config.cycles_per_epoch)?;
        let posterior = update_posterior(&prior, &log, model.severity())?;
        Ok(Self { id, model, config, initial_state, prior, log, posterior })
    }

    /// The robot with `batch` appended; `self` is untouched on error.
    pub fn appended(&self, batch: &InspectionBatch) -> Result<Self, ApiError> {
        if batch.inspections.is_empty() {
            return Err(ApiError::Unprocessable("no inspections in the batch".into()));
        }
        let mut segments = Vec::with_capacity(batch.tasks.len());
        for t in &batch.tasks {
            let state = self.model.state_index(&t.state)?;
            segments.push(Segment { state, start: t.start, end: t.end });
        }
        let mut history = self.log.task_history.clone();
        history.extend(&segments)?;
        let mut epochs = self.log.epochs.clone();
        epochs.extend_from_slice(&batch.inspections);
        let log = InspectionLog::new(epochs, history, self.config.cycles_per_epoch)?;
        let posterior = update_posterior(&self.prior, &log, self.model.severity())?;
        Ok(Self { log, posterior, ..self.clone() })
    }

    pub fn posterior(&self) -> &PosteriorState {
        &self.posterior
    }

    pub fn log(&self) -> &InspectionLog {
        &self.log
    }

    /// Prediction inputs at the latest inspection.
    pub fn context(&self) -> Result<PredictionContext, ApiError> {
        let last = self.log.epochs.len() - 1;
        if self.log.task_history.is_empty() {
            let e = self.log.last();
            return Ok(PredictionContext {
                accuracy: e.accuracy,
                threshold: self.config.threshold,
                state: self.model.states()[self.initial_state].clone(),
                time: e.time,
                cycles: e.cycles,
                cycles_per_epoch: self.config.cycles_per_epoch,
                hours_per_epoch: self.log.hours_per_epoch(),
            });
        }
        Ok(PredictionContext::at_epoch(&self.log, last, self.config.threshold, &self.model)?)
    }
}
