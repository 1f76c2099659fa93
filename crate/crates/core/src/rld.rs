//! Remaining lifetime distribution at an inspection epoch.
//!
//! Two routes are offered:
//!
//! * **closed form** – average the drift over the long-run task mix and use
//!   the inverse-Gaussian first-passage law of the resulting Brownian motion;
//! * **Monte Carlo** – draw drift coefficients and chain rates from the
//!   posterior, simulate future tasks and degradation, and record the first
//!   passage of each path (censored at the horizon).
//!
//! The closed form is a lower bound on the long-horizon Monte-Carlo mean
//! (Jensen's inequality on `1/rate`); [`lemma1_check`] measures that gap.

use crate::bayes::{ParameterSampler, PosteriorState};
use crate::ctmc::{validate_probabilities, ChainCursor, TaskSeverityModel};
use crate::degradation::{crossing_time, InverseGaussian};
use crate::error::{Error, Result};
use crate::rng::{substream, with_jobs};
use crate::stats;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::hint::black_box;
use std::time::Instant;

/// Steps per expected lifetime used when no time step is given.
pub const DEFAULT_STEPS_PER_LIFETIME: f64 = 1000.0;

/// A hypothesized future task mix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WhatIfScenario(Vec<f64>);

impl WhatIfScenario {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        validate_probabilities(&pi)?;
        Ok(Self(pi))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WhatIfScenario {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WhatIfScenario> for Vec<f64> {
    fn from(s: WhatIfScenario) -> Self {
        s.0
    }
}

/// `μ_α Σ π_i ψ_i + μ_β`.
pub fn effective_rate(mean_alpha: f64, mean_beta: f64, pi: &[f64], severity: &[f64]) -> Result<f64> {
    validate_probabilities(pi)?;
    if pi.len() != severity.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} proportions for {} severity states",
            pi.len(),
            severity.len()
        )));
    }
    let mean_severity: f64 = pi.iter().zip(severity).map(|(p, s)| p * s).sum();
    let rate = mean_alpha * mean_severity + mean_beta;
    if !(rate > 0.0) {
        return Err(Error::DegenerateDrift(rate));
    }
    Ok(rate)
}

/// Closed-form lifetime law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RldClosedForm {
    pub distribution: InverseGaussian,
    pub effective_rate: f64,
    pub residual_barrier: f64,
}

pub fn rld_approach1(accuracy: f64, threshold: f64, effective_rate: f64, gamma: f64) -> Result<RldClosedForm> {
    if accuracy >= threshold {
        return Err(Error::AlreadyFailed { accuracy, threshold });
    }
    if !(effective_rate > 0.0) {
        return Err(Error::DegenerateDrift(effective_rate));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma {gamma} must be positive")));
    }
    let barrier = threshold - accuracy;
    let distribution = InverseGaussian::new(barrier / effective_rate, barrier * barrier / (gamma * gamma))?;
    Ok(RldClosedForm { distribution, effective_rate, residual_barrier: barrier })
}

/// Censored Monte-Carlo lifetimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RldEmpirical {
    /// Ascending first-passage times, all within the horizon.
    pub failure_times: Vec<f64>,
    pub censored_count: usize,
    pub horizon: f64,
    pub m_total: usize,
}

impl RldEmpirical {
    /// Defective empirical cdf: failures up to `t` over all paths.
    pub fn cdf(&self, t: f64) -> f64 {
        self.failure_times.partition_point(|&x| x <= t) as f64 / self.m_total as f64
    }

    pub fn failure_fraction(&self) -> f64 {
        self.failure_times.len() as f64 / self.m_total as f64
    }

    pub fn ks_distance(&self, dist: &InverseGaussian) -> f64 {
        stats::ks_statistic(&self.failure_times, self.m_total, Some(self.horizon), |t| {
            dist.cdf(t).unwrap_or(0.0)
        })
    }
}

pub trait RemainingLifetime {
    fn median_hours(&self) -> Result<f64>;
}

impl RemainingLifetime for RldClosedForm {
    fn median_hours(&self) -> Result<f64> {
        self.distribution.quantile(0.5)
    }
}

impl RemainingLifetime for RldEmpirical {
    /// Interpolated middle order statistic; censored paths sort last.
    fn median_hours(&self) -> Result<f64> {
        let failed = self.failure_times.len();
        let err = Error::HorizonTooShort { failed, total: self.m_total };
        if self.m_total == 0 {
            return Err(err);
        }
        let pos = (self.m_total - 1) as f64 / 2.0;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        if hi >= failed {
            return Err(err);
        }
        let x = &self.failure_times;
        Ok(x[lo] + (pos - lo as f64) * (x[hi] - x[lo]))
    }
}

/// Converts hours into operational cycles using the mean epoch length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleScale {
    pub hours_per_epoch: f64,
    pub cycles_per_epoch: u64,
}

impl CycleScale {
    pub fn cycles(&self, hours: f64) -> f64 {
        hours / self.hours_per_epoch * self.cycles_per_epoch as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RulEstimate {
    pub hours: f64,
    pub cycles: Option<f64>,
}

pub fn rul_median(rld: &impl RemainingLifetime, scale: Option<CycleScale>) -> Result<RulEstimate> {
    let hours = rld.median_hours()?;
    Ok(RulEstimate { hours, cycles: scale.map(|s| s.cycles(hours)) })
}

/// Inputs of a Monte-Carlo prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Approach2Config {
    pub accuracy: f64,
    pub threshold: f64,
    pub current_state: usize,
    pub paths: usize,
    pub horizon: f64,
    pub seed: u64,
    /// Grid step; defaults to the expected closed-form lifetime / 1000.
    pub dt: Option<f64>,
    pub jobs: Option<usize>,
}

/// Closed-form prediction under the long-run task mix of the posterior-mean
/// chain. `model` supplies the severities.
pub fn closed_form(
    posterior: &PosteriorState,
    model: &TaskSeverityModel,
    accuracy: f64,
    threshold: f64,
) -> Result<RldClosedForm> {
    if posterior.ctmc_stats.n_states() != model.n_states() {
        return Err(Error::DimensionMismatch("chain statistics do not match the model".into()));
    }
    let pi = posterior.mean_task_mix()?;
    let rate = effective_rate(posterior.mean_alpha(), posterior.mean_beta(), pi.probabilities(), model.severity())?;
    rld_approach1(accuracy, threshold, rate, posterior.gamma)
}

fn default_dt(posterior: &PosteriorState, model: &TaskSeverityModel, accuracy: f64, threshold: f64) -> Result<f64> {
    let rld = closed_form(posterior, model, accuracy, threshold)?;
    Ok(rld.distribution.mean() / DEFAULT_STEPS_PER_LIFETIME)
}

pub fn rld_approach2(
    posterior: &PosteriorState,
    model: &TaskSeverityModel,
    config: &Approach2Config,
) -> Result<RldEmpirical> {
    if config.paths == 0 {
        return Err(Error::InvalidParameter("at least one path is required".into()));
    }
    if !(config.horizon > 0.0 && config.horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon {} must be positive", config.horizon)));
    }
    if config.accuracy >= config.threshold {
        return Err(Error::AlreadyFailed { accuracy: config.accuracy, threshold: config.threshold });
    }
    if config.current_state >= model.n_states() {
        return Err(Error::UnknownState(config.current_state.to_string()));
    }
    if posterior.ctmc_stats.n_states() != model.n_states() {
        return Err(Error::DimensionMismatch(format!(
            "posterior chain statistics cover {} states, model has {}",
            posterior.ctmc_stats.n_states(),
            model.n_states()
        )));
    }
    let dt = match config.dt {
        Some(dt) if dt > 0.0 && dt.is_finite() => dt,
        Some(dt) => return Err(Error::InvalidParameter(format!("time step {dt} must be positive"))),
        None => default_dt(posterior, model, config.accuracy, config.threshold)?,
    };
    let sampler = ParameterSampler::new(posterior)?;
    let path = PathSpec {
        severity: model.severity(),
        state: config.current_state,
        accuracy: config.accuracy,
        threshold: config.threshold,
        horizon: config.horizon,
        gamma: posterior.gamma,
        dt,
    };
    let outcomes: Vec<Option<f64>> = with_jobs(config.jobs, || {
        (0..config.paths as u64)
            .into_par_iter()
            .map(|m| path.simulate(&sampler, config.seed, m))
            .collect()
    });
    let mut failure_times: Vec<f64> = outcomes.iter().flatten().copied().collect();
    failure_times.sort_by(f64::total_cmp);
    Ok(RldEmpirical {
        censored_count: config.paths - failure_times.len(),
        failure_times,
        horizon: config.horizon,
        m_total: config.paths,
    })
}

struct PathSpec<'a> {
    severity: &'a [f64],
    state: usize,
    accuracy: f64,
    threshold: f64,
    horizon: f64,
    gamma: f64,
    dt: f64,
}

impl PathSpec<'_> {
    /// Path `m`: one posterior draw, then chain and degradation on the
    /// uniform grid `k·dt` until first passage or the horizon.
    fn simulate(&self, sampler: &ParameterSampler, seed: u64, m: u64) -> Option<f64> {
        let mut rng = substream(seed, m);
        let draw = sampler.draw(&mut rng);
        let mut cursor = ChainCursor::start(&draw.chain, self.state, 0.0, &mut rng);
        let (mut t, mut a) = (0.0, self.accuracy);
        let mut k = 0u64;
        loop {
            k += 1;
            let t_next = (k as f64 * self.dt).min(self.horizon);
            let h = t_next - t;
            let exposure = cursor.exposure_until(t_next, self.severity, &mut rng);
            let z: f64 = rng.sample(StandardNormal);
            let a_next = a + draw.alpha * exposure + draw.beta * h + self.gamma * h.sqrt() * z;
            if a_next >= self.threshold {
                return Some(crossing_time(t, a, t_next, a_next, self.threshold));
            }
            if let Some(t_cross) = self.bridge_crossing(t, a, t_next, a_next, &mut rng) {
                return Some(t_cross);
            }
            if t_next >= self.horizon {
                return None;
            }
            t = t_next;
            a = a_next;
        }
    }

    /// Excursions above the threshold between two grid points: given both
    /// endpoints below `D`, the Brownian bridge crosses with probability
    /// `exp(−2 (D − a0)(D − a1) / (γ² h))`. The crossing is placed where the
    /// two gaps balance.
    fn bridge_crossing<R: Rng + ?Sized>(&self, t0: f64, a0: f64, t1: f64, a1: f64, rng: &mut R) -> Option<f64> {
        let var = self.gamma * self.gamma * (t1 - t0);
        if var <= 0.0 {
            return None;
        }
        let (g0, g1) = (self.threshold - a0, self.threshold - a1);
        let p = (-2.0 * g0 * g1 / var).exp();
        if p < 1e-12 || rng.random::<f64>() >= p {
            return None;
        }
        Some(t0 + (t1 - t0) * g0 / (g0 + g1))
    }
}

/// One row of a what-if table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfRow {
    pub pi: Vec<f64>,
    pub median_hours: f64,
    pub median_cycles: Option<f64>,
    pub ig: InverseGaussian,
}

/// Closed-form prediction for each hypothesized future task mix.
pub fn whatif(
    posterior: &PosteriorState,
    accuracy: f64,
    threshold: f64,
    scenarios: &[WhatIfScenario],
    severity: &[f64],
    scale: Option<CycleScale>,
) -> Result<Vec<WhatIfRow>> {
    if scenarios.is_empty() {
        return Err(Error::InvalidProportions("no scenarios given".into()));
    }
    scenarios
        .iter()
        .map(|s| {
            let rate = effective_rate(posterior.mean_alpha(), posterior.mean_beta(), s.probabilities(), severity)?;
            let rld = rld_approach1(accuracy, threshold, rate, posterior.gamma)?;
            let rul = rul_median(&rld, scale)?;
            Ok(WhatIfRow {
                pi: s.probabilities().to_vec(),
                median_hours: rul.hours,
                median_cycles: rul.cycles,
                ig: rld.distribution,
            })
        })
        .collect()
}

/// The grid of future task mixes used throughout the what-if analysis.
pub fn standard_scenarios() -> Vec<WhatIfScenario> {
    [1.0, 0.75, 0.5, 0.25, 0.0]
        .iter()
        .map(|&x| WhatIfScenario::new(vec![x, 1.0 - x]).expect("valid mix"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Config {
    pub accuracy: f64,
    pub threshold: f64,
    pub current_state: usize,
    pub paths: usize,
    /// Horizon as a multiple of the closed-form expected lifetime.
    pub horizon_multiplier: f64,
    pub seed: u64,
    pub dt: Option<f64>,
    pub jobs: Option<usize>,
}

pub const LEMMA1_MIN_PATHS: usize = 5000;
pub const LEMMA1_MIN_HORIZON_MULTIPLIER: f64 = 20.0;
pub const LEMMA1_MIN_FAILURE_FRACTION: f64 = 0.999;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub expected_t1: f64,
    pub mean_t2: f64,
    pub standard_error: f64,
    /// `mean(T2) − E[T1]`.
    pub jensen_gap: f64,
    pub failure_fraction: f64,
    pub paths: usize,
    pub pass: bool,
}

/// Compares the mean of near-uncensored Monte-Carlo lifetimes with the
/// closed-form expected lifetime; passes iff `mean(T2) ≥ E[T1] − 2·SE`.
pub fn lemma1_check(posterior: &PosteriorState, model: &TaskSeverityModel, config: &Lemma1Config) -> Result<Lemma1Report> {
    if config.paths < LEMMA1_MIN_PATHS {
        return Err(Error::InvalidParameter(format!(
            "{} paths is below the {LEMMA1_MIN_PATHS} needed to approximate the limit",
            config.paths
        )));
    }
    let expected_t1 = closed_form(posterior, model, config.accuracy, config.threshold)?.distribution.mean();
    let rld = rld_approach2(
        posterior,
        model,
        &Approach2Config {
            accuracy: config.accuracy,
            threshold: config.threshold,
            current_state: config.current_state,
            paths: config.paths,
            horizon: config.horizon_multiplier * expected_t1,
            seed: config.seed,
            dt: config.dt,
            jobs: config.jobs,
        },
    )?;
    let failure_fraction = rld.failure_fraction();
    if config.horizon_multiplier < LEMMA1_MIN_HORIZON_MULTIPLIER || failure_fraction < LEMMA1_MIN_FAILURE_FRACTION {
        return Err(Error::ExcessiveCensoring { failure_fraction, horizon_multiplier: config.horizon_multiplier });
    }
    let times = &rld.failure_times;
    let mean_t2 = stats::mean(times);
    let standard_error = (stats::variance(times) / times.len() as f64).sqrt();
    Ok(Lemma1Report {
        expected_t1,
        mean_t2,
        standard_error,
        jensen_gap: mean_t2 - expected_t1,
        failure_fraction,
        paths: config.paths,
        pass: mean_t2 >= expected_t1 - 2.0 * standard_error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub accuracy: f64,
    pub threshold: f64,
    pub current_state: usize,
    pub path_grid: Vec<usize>,
    pub horizon_multiplier: f64,
    pub seed: u64,
    /// Closed-form calls per timing batch.
    pub closed_form_calls: usize,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub paths: usize,
    pub approach1_seconds: f64,
    pub approach2_seconds: f64,
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    /// Largest over smallest closed-form time across the grid.
    pub approach1_spread: f64,
    /// R² of the Monte-Carlo time regressed on the path count.
    pub approach2_r_squared: f64,
}

/// Wall-clock comparison of the two routes over a grid of path counts.
pub fn benchmark(posterior: &PosteriorState, model: &TaskSeverityModel, config: &BenchmarkConfig) -> Result<BenchmarkReport> {
    if config.path_grid.is_empty() {
        return Err(Error::InvalidParameter("empty path grid".into()));
    }
    let calls = config.closed_form_calls.max(1);
    let closed_form_once = || -> Result<f64> {
        let rld = closed_form(black_box(posterior), black_box(model), config.accuracy, config.threshold)?;
        rul_median(&rld, None).map(|r| r.hours)
    };
    closed_form_once()?;
    let expected_t1 = closed_form(posterior, model, config.accuracy, config.threshold)?.distribution.mean();

    let mut rows = Vec::with_capacity(config.path_grid.len());
    for &paths in &config.path_grid {
        let mut batches = Vec::with_capacity(5);
        for _ in 0..5 {
            let start = Instant::now();
            for _ in 0..calls {
                black_box(closed_form_once()?);
            }
            batches.push(start.elapsed().as_secs_f64() / calls as f64);
        }
        batches.sort_by(f64::total_cmp);
        let approach1_seconds = batches[2];

        let start = Instant::now();
        black_box(rld_approach2(
            posterior,
            model,
            &Approach2Config {
                accuracy: config.accuracy,
                threshold: config.threshold,
                current_state: config.current_state,
                paths,
                horizon: config.horizon_multiplier * expected_t1,
                seed: config.seed,
                dt: None,
                jobs: config.jobs,
            },
        )?);
        let approach2_seconds = start.elapsed().as_secs_f64();
        rows.push(BenchmarkRow {
            paths,
            approach1_seconds,
            approach2_seconds,
            speedup: approach2_seconds / approach1_seconds,
        });
    }
    let a1: Vec<f64> = rows.iter().map(|r| r.approach1_seconds).collect();
    let max = a1.iter().copied().fold(f64::MIN, f64::max);
    let min = a1.iter().copied().fold(f64::MAX, f64::min);
    let approach2_r_squared = if rows.len() >= 2 {
        let x: Vec<f64> = rows.iter().map(|r| r.paths as f64).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.approach2_seconds).collect();
        stats::linear_fit(&x, &y).2
    } else {
        1.0
    };
    Ok(BenchmarkReport { rows, approach1_spread: max / min, approach2_r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctmc::TransitionStats;
    use approx::assert_abs_diff_eq;

    #[test]
    fn effective_rate_examples() {
        let sev = [1.0, 5.0];
        assert_abs_diff_eq!(effective_rate(0.1, 0.05, &[0.5, 0.5], &sev).unwrap(), 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(effective_rate(0.0, 0.05, &[0.3, 0.7], &sev).unwrap(), 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(effective_rate(0.1, 0.05, &[1.0, 0.0], &sev).unwrap(), 0.15, epsilon = 1e-15);
        assert!(matches!(effective_rate(-0.1, 0.05, &[0.0, 1.0], &sev), Err(Error::DegenerateDrift(_))));
        assert!(effective_rate(0.1, 0.05, &[0.6, 0.6], &sev).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let r = rld_approach1(4.0, 10.0, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(r.distribution.mean(), 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.distribution.shape(), 36.0, epsilon = 1e-12);

        let r = rld_approach1(4.0, 10.0, 0.35, 0.2).unwrap();
        assert_abs_diff_eq!(r.distribution.mean(), 17.142857142857142, epsilon = 1e-12);
        assert_abs_diff_eq!(r.distribution.shape(), 900.0, epsilon = 1e-9);

        let near = rld_approach1(10.0 - 1e-9, 10.0, 0.5, 1.0).unwrap();
        assert!(near.distribution.mean() < 1e-8 && near.distribution.shape() < 1e-17);

        assert!(matches!(rld_approach1(10.0, 10.0, 0.5, 1.0), Err(Error::AlreadyFailed { .. })));
    }

    #[test]
    fn stored_fields_determine_parameters() {
        let r = rld_approach1(1.5, 7.0, 0.3, 0.4).unwrap();
        assert_abs_diff_eq!(r.distribution.mean(), r.residual_barrier / r.effective_rate, epsilon = 1e-12);
        assert_abs_diff_eq!(r.distribution.shape(), r.residual_barrier.powi(2) / 0.16, epsilon = 1e-9);
    }

    #[test]
    fn empirical_median_examples() {
        let e = RldEmpirical { failure_times: vec![1.0, 2.0, 3.0], censored_count: 0, horizon: 5.0, m_total: 3 };
        assert_eq!(e.median_hours().unwrap(), 2.0);
        let e = RldEmpirical { failure_times: vec![1.0, 2.0, 3.0, 4.0], censored_count: 0, horizon: 5.0, m_total: 4 };
        assert_eq!(e.median_hours().unwrap(), 2.5);
        let e = RldEmpirical { failure_times: vec![1.0, 2.0, 3.0, 4.0], censored_count: 6, horizon: 5.0, m_total: 10 };
        assert!(matches!(e.median_hours(), Err(Error::HorizonTooShort { failed: 4, total: 10 })));
        assert_eq!(e.cdf(2.5), 0.2);
    }

    #[test]
    fn cycle_conversion() {
        let rul = rul_median(
            &RldEmpirical { failure_times: vec![10.0], censored_count: 0, horizon: 20.0, m_total: 1 },
            Some(CycleScale { hours_per_epoch: 2.0, cycles_per_epoch: 50 }),
        )
        .unwrap();
        assert_eq!(rul.cycles, Some(250.0));
    }

    fn posterior(alpha: f64, beta: f64, var: f64, gamma: f64, n: usize) -> PosteriorState {
        PosteriorState::new([alpha, beta], [[var, 0.0], [0.0, var]], gamma, TransitionStats::empty(n)).unwrap()
    }

    #[test]
    fn whatif_is_monotone_and_sized() {
        let p = posterior(0.1, 0.05, 0.0, 0.2, 2);
        let rows = whatif(&p, 0.0, 6.0, &standard_scenarios(), &[1.0, 5.0], None).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.windows(2).all(|w| w[0].median_hours > w[1].median_hours));
        // π = [1, 0]: IG(40, 900), median from scipy.stats.invgauss
        assert_abs_diff_eq!(rows[0].median_hours, 39.133428284921, epsilon = 1e-8);
        assert!(whatif(&p, 0.0, 6.0, &[], &[1.0, 5.0], None).is_err());
    }

    #[test]
    fn all_censored_when_horizon_is_short() {
        let model = TaskSeverityModel::with_indexed_states(vec![vec![0.0]], vec![3.0]).unwrap();
        let p = posterior(0.1, 0.05, 0.0, 0.2, 1);
        let cfg = Approach2Config {
            accuracy: 0.0,
            threshold: 6.0,
            current_state: 0,
            paths: 200,
            horizon: 0.5,
            seed: 1,
            dt: None,
            jobs: None,
        };
        let r = rld_approach2(&p, &model, &cfg).unwrap();
        assert_eq!(r.censored_count, 200);
        assert!(r.failure_times.is_empty());
        assert!(rld_approach2(&p, &model, &Approach2Config { paths: 0, ..cfg.clone() }).is_err());
        assert!(rld_approach2(&p, &model, &Approach2Config { horizon: 0.0, ..cfg }).is_err());
    }

    #[test]
    fn deterministic_limit_fails_on_schedule() {
        let model = TaskSeverityModel::with_indexed_states(vec![vec![0.0]], vec![3.0]).unwrap();
        let p = posterior(0.1, 0.05, 0.0, 1e-12, 1);
        let cfg = Approach2Config {
            accuracy: 1.0,
            threshold: 7.0,
            current_state: 0,
            paths: 50,
            horizon: 100.0,
            seed: 2,
            dt: Some(0.01),
            jobs: None,
        };
        let r = rld_approach2(&p, &model, &cfg).unwrap();
        let expected = 6.0 / 0.35;
        assert!(r.failure_times.iter().all(|t| (t - expected).abs() <= 0.01));
    }

    #[test]
    fn lemma_rejects_short_horizons() {
        let model = TaskSeverityModel::with_indexed_states(vec![vec![0.0]], vec![3.0]).unwrap();
        let p = posterior(0.1, 0.05, 0.0, 0.2, 1);
        let cfg = Lemma1Config {
            accuracy: 0.0,
            threshold: 6.0,
            current_state: 0,
            paths: 5000,
            horizon_multiplier: 0.1,
            seed: 4,
            dt: None,
            jobs: None,
        };
        assert!(matches!(lemma1_check(&p, &model, &cfg), Err(Error::ExcessiveCensoring { .. })));
    }
}
