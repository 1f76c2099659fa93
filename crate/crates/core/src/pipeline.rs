//! The inspect → update → predict loop shared by the command line and the
//! HTTP service, so both produce identical documents for identical inputs.

use crate::bayes::{update_posterior, InspectionLog, PosteriorState};
use crate::ctmc::{TaskSeverityModel, TransitionStats};
use crate::degradation::InverseGaussian;
use crate::error::{Error, Result};
use crate::rld::{
    closed_form, rld_approach2, rul_median, whatif, Approach2Config, CycleScale, RemainingLifetime, WhatIfRow,
    WhatIfScenario,
};
use crate::simulator::update_schedule;
use serde::{Deserialize, Serialize};

/// Monte-Carlo horizon, as a multiple of the closed-form expected lifetime,
/// used when none is given.
pub const DEFAULT_HORIZON_MULTIPLIER: f64 = 50.0;

/// Where a robot stands at the inspection a prediction is made from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionContext {
    pub accuracy: f64,
    pub threshold: f64,
    /// Task state in force right after the inspection.
    pub state: String,
    #[serde(default)]
    pub time: f64,
    #[serde(default)]
    pub cycles: u64,
    pub cycles_per_epoch: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hours_per_epoch: Option<f64>,
}

impl PredictionContext {
    /// Context at inspection index `k` of `log`.
    pub fn at_epoch(log: &InspectionLog, k: usize, threshold: f64, model: &TaskSeverityModel) -> Result<Self> {
        let e = log
            .epochs
            .get(k)
            .ok_or_else(|| Error::InvalidLog(format!("no inspection with index {k}")))?;
        let state = log
            .task_history
            .state_at(e.time)
            .ok_or_else(|| Error::InvalidLog(format!("no task recorded at t={}", e.time)))?;
        Ok(Self {
            accuracy: e.accuracy,
            threshold,
            state: model.states()[state].clone(),
            time: e.time,
            cycles: e.cycles,
            cycles_per_epoch: log.cycles_per_epoch,
            hours_per_epoch: log.truncated(k).hours_per_epoch(),
        })
    }

    pub fn scale(&self) -> Option<CycleScale> {
        self.hours_per_epoch
            .filter(|h| *h > 0.0)
            .map(|hours_per_epoch| CycleScale { hours_per_epoch, cycles_per_epoch: self.cycles_per_epoch })
    }
}

/// RLD document written by `predict` and returned by the service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RldReport {
    pub approach: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ig: Option<InverseGaussian>,
    /// `null` when the Monte-Carlo median lies beyond the horizon.
    pub median_hours: Option<f64>,
    pub median_cycles: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub censored: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

pub fn predict_closed_form(
    posterior: &PosteriorState,
    model: &TaskSeverityModel,
    ctx: &PredictionContext,
) -> Result<RldReport> {
    let rld = closed_form(posterior, model, ctx.accuracy, ctx.threshold)?;
    let rul = rul_median(&rld, ctx.scale())?;
    Ok(RldReport {
        approach: 1,
        ig: Some(rld.distribution),
        median_hours: Some(rul.hours),
        median_cycles: rul.cycles,
        failure_times: None,
        censored: None,
        horizon: None,
        paths: None,
        seed: None,
        dt: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    pub paths: usize,
    /// Hours; defaults to [`DEFAULT_HORIZON_MULTIPLIER`] expected lifetimes.
    pub horizon: Option<f64>,
    pub seed: u64,
    pub dt: Option<f64>,
    pub jobs: Option<usize>,
}

pub fn predict_monte_carlo(
    posterior: &PosteriorState,
    model: &TaskSeverityModel,
    ctx: &PredictionContext,
    opts: &MonteCarloOptions,
) -> Result<RldReport> {
    let horizon = match opts.horizon {
        Some(h) => h,
        None => {
            DEFAULT_HORIZON_MULTIPLIER * closed_form(posterior, model, ctx.accuracy, ctx.threshold)?.distribution.mean()
        }
    };
    let rld = rld_approach2(
        posterior,
        model,
        &Approach2Config {
            accuracy: ctx.accuracy,
            threshold: ctx.threshold,
            current_state: model.state_index(&ctx.state)?,
            paths: opts.paths,
            horizon,
            seed: opts.seed,
            dt: opts.dt,
            jobs: opts.jobs,
        },
    )?;
    let median = match rld.median_hours() {
        Ok(h) => Some(h),
        Err(Error::HorizonTooShort { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(RldReport {
        approach: 2,
        ig: None,
        median_hours: median,
        median_cycles: median.and_then(|h| ctx.scale().map(|s| s.cycles(h))),
        censored: Some(rld.censored_count),
        horizon: Some(rld.horizon),
        paths: Some(rld.m_total),
        seed: Some(opts.seed),
        dt: opts.dt,
        failure_times: Some(rld.failure_times),
    })
}

pub fn whatif_table(
    posterior: &PosteriorState,
    model: &TaskSeverityModel,
    ctx: &PredictionContext,
    scenarios: &[WhatIfScenario],
) -> Result<Vec<WhatIfRow>> {
    for s in scenarios {
        if s.probabilities().len() != model.n_states() {
            return Err(Error::InvalidProportions(format!(
                "scenario has {} entries, the model has {} states",
                s.probabilities().len(),
                model.n_states()
            )));
        }
    }
    whatif(posterior, ctx.accuracy, ctx.threshold, scenarios, model.severity(), ctx.scale())
}

/// Posterior and context at one update point of a run-to-failure log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub fraction: f64,
    pub epoch: usize,
    pub posterior: PosteriorState,
    pub context: PredictionContext,
}

/// Updates a diffuse prior with the inspections up to each fraction of the
/// realized lifetime.
pub fn fit_update_points(
    log: &InspectionLog,
    failure_time: f64,
    gamma: f64,
    threshold: f64,
    model: &TaskSeverityModel,
    fractions: &[f64],
) -> Result<Vec<FitPoint>> {
    let prior = PosteriorState::diffuse(gamma, TransitionStats::empty(model.n_states()))?;
    let schedule = update_schedule(log, failure_time, fractions)?;
    fractions
        .iter()
        .zip(schedule)
        .map(|(&fraction, k)| {
            let posterior = update_posterior(&prior, &log.truncated(k), model.severity())?;
            let context = PredictionContext::at_epoch(log, k, threshold, model)?;
            Ok(FitPoint { fraction, epoch: k, posterior, context })
        })
        .collect()
}
