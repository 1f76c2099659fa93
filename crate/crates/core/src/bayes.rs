//! Conjugate updating of the drift coefficients at inspection epochs.
//!
//! Between inspections `k-1` and `k` the accuracy increment is
//!
//! ```text
//! ΔA_k ~ Normal(α E_k + β Δt_k, γ² Δt_k)
//! ```
//!
//! where `E_k` is the integrated task severity over the interval. With `γ`
//! fixed this is a linear-Gaussian observation of `(α, β)`, so a bivariate
//! normal prior stays bivariate normal. The chain rates carry their own
//! Gamma–Dirichlet posterior built from transition counts and dwell times.

use crate::ctmc::{stationary_distribution_of, JumpChain, SeverityPath, StationaryDistribution, TransitionStats};
use crate::error::{Error, Result};
use crate::rng::{substream, SimRng};
use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Hyperparameters of the Gamma prior on each exit rate.
pub const EXIT_RATE_PRIOR_SHAPE: f64 = 1e-3;
pub const EXIT_RATE_PRIOR_RATE: f64 = 1e-3;

pub const DEFAULT_PRIOR_VARIANCE: f64 = 1e4;

/// One inspection record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inspection {
    pub epoch: usize,
    pub cycles: u64,
    pub time: f64,
    pub accuracy: f64,
}

/// Inspections taken every `cycles_per_epoch` operational cycles, plus the
/// task history that connects them.
#[derive(Debug, Clone, PartialEq)]
pub struct InspectionLog {
    pub epochs: Vec<Inspection>,
    pub task_history: SeverityPath,
    pub cycles_per_epoch: u64,
}

/// Sufficient data of one inter-inspection interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Increment {
    pub delta_accuracy: f64,
    /// Integrated severity over the interval.
    pub exposure: f64,
    pub duration: f64,
}

impl InspectionLog {
    pub fn new(epochs: Vec<Inspection>, task_history: SeverityPath, cycles_per_epoch: u64) -> Result<Self> {
        let log = Self { epochs, task_history, cycles_per_epoch };
        log.validate()?;
        Ok(log)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cycles_per_epoch == 0 {
            return Err(Error::InvalidLog("cycles per epoch must be at least 1".into()));
        }
        if self.epochs.is_empty() {
            return Err(Error::InvalidLog("no inspections".into()));
        }
        for (i, e) in self.epochs.iter().enumerate() {
            if !(e.time.is_finite() && e.accuracy.is_finite()) {
                return Err(Error::InvalidLog(format!("inspection {i} has non-finite values")));
            }
            if i == 0 {
                continue;
            }
            let prev = &self.epochs[i - 1];
            if e.epoch != prev.epoch + 1 {
                return Err(Error::InvalidLog(format!("epoch {} follows epoch {}", e.epoch, prev.epoch)));
            }
            if e.cycles <= prev.cycles || e.cycles - prev.cycles != self.cycles_per_epoch {
                return Err(Error::InvalidLog(format!(
                    "cycles {} after {} break the spacing of {}",
                    e.cycles, prev.cycles, self.cycles_per_epoch
                )));
            }
            if e.time <= prev.time {
                return Err(Error::InvalidLog(format!("time {} does not increase after {}", e.time, prev.time)));
            }
        }
        if self.epochs.len() > 1 {
            let (first, last) = (self.epochs[0].time, self.last().time);
            let tol = 1e-9 * last.abs().max(1.0);
            if self.task_history.is_empty()
                || self.task_history.start() > first + tol
                || self.task_history.end() < last - tol
            {
                return Err(Error::InvalidLog(format!(
                    "task history [{}, {}] does not cover inspections [{first}, {last}]",
                    self.task_history.start(),
                    self.task_history.end()
                )));
            }
        }
        Ok(())
    }

    pub fn last(&self) -> &Inspection {
        self.epochs.last().expect("validated logs are non-empty")
    }

    /// The log as it stood at inspection index `k`.
    pub fn truncated(&self, k: usize) -> InspectionLog {
        let epochs = self.epochs[..=k.min(self.epochs.len() - 1)].to_vec();
        let t_end = epochs.last().map_or(0.0, |e| e.time);
        InspectionLog {
            task_history: self.task_history.truncated(t_end),
            epochs,
            cycles_per_epoch: self.cycles_per_epoch,
        }
    }

    /// Increments after inspection index `from` (exclusive) up to the end.
    pub fn increments_from(&self, severity: &[f64], from: usize) -> Result<Vec<Increment>> {
        self.epochs
            .windows(2)
            .skip(from)
            .map(|w| {
                let duration = w[1].time - w[0].time;
                if duration <= 0.0 {
                    return Err(Error::InvalidLog(format!("non-positive interval ending at {}", w[1].time)));
                }
                Ok(Increment {
                    delta_accuracy: w[1].accuracy - w[0].accuracy,
                    exposure: self.task_history.integrated_severity(severity, w[0].time, w[1].time)?,
                    duration,
                })
            })
            .collect()
    }

    pub fn increments(&self, severity: &[f64]) -> Result<Vec<Increment>> {
        self.increments_from(severity, 0)
    }

    /// Average hours between consecutive inspections.
    pub fn hours_per_epoch(&self) -> Option<f64> {
        let n = self.epochs.len();
        (n > 1).then(|| (self.last().time - self.epochs[0].time) / (n - 1) as f64)
    }
}

/// Whether an update also folds newly observed tasks into the chain posterior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainUpdate {
    #[default]
    Online,
    Frozen,
}

/// Gaussian belief over `(α, β)` with a point `γ` and chain statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorState {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
    pub gamma: f64,
    pub ctmc_stats: TransitionStats,
    /// Index of the last inspection folded in, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_epoch: Option<usize>,
}

impl PosteriorState {
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2], gamma: f64, ctmc_stats: TransitionStats) -> Result<Self> {
        let p = Self { mean, cov, gamma, ctmc_stats, last_epoch: None };
        p.validate()?;
        Ok(p)
    }

    /// Zero-mean prior with covariance `1e4·I`.
    pub fn diffuse(gamma: f64, ctmc_stats: TransitionStats) -> Result<Self> {
        let v = DEFAULT_PRIOR_VARIANCE;
        Self::new([0.0, 0.0], [[v, 0.0], [0.0, v]], gamma, ctmc_stats)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma {} must be positive", self.gamma)));
        }
        if self.mean.iter().chain(self.cov.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("posterior moments must be finite".into()));
        }
        let c = self.cov;
        let scale = c[0][0].abs().max(c[1][1].abs()).max(f64::MIN_POSITIVE);
        if (c[0][1] - c[1][0]).abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::NotPositiveDefinite("covariance is not symmetric".into()));
        }
        cholesky_psd(&c)?;
        self.ctmc_stats.validate()
    }

    pub fn mean_alpha(&self) -> f64 {
        self.mean[0]
    }

    pub fn mean_beta(&self) -> f64 {
        self.mean[1]
    }

    /// Generator at the posterior means of the exit rates and jump
    /// probabilities, i.e. the chain Monte Carlo draws scatter around.
    pub fn mean_generator(&self) -> Vec<Vec<f64>> {
        let stats = &self.ctmc_stats;
        let n = stats.n_states();
        let mut q = vec![vec![0.0; n]; n];
        if n == 1 {
            return q;
        }
        for (i, row) in q.iter_mut().enumerate() {
            let exits = stats.exits(i);
            let rate = (exits + EXIT_RATE_PRIOR_SHAPE) / (stats.dwell[i] + EXIT_RATE_PRIOR_RATE);
            let total = exits + (n - 1) as f64;
            for j in (0..n).filter(|&j| j != i) {
                row[j] = rate * (stats.counts[i][j] + 1.0) / total;
            }
            row[i] = -row.iter().sum::<f64>();
        }
        q
    }

    /// Long-run task mix of [`Self::mean_generator`].
    pub fn mean_task_mix(&self) -> Result<StationaryDistribution> {
        self.ctmc_stats.validate()?;
        if self.ctmc_stats.n_states() == 1 {
            return StationaryDistribution::new(vec![1.0]);
        }
        stationary_distribution_of(&self.mean_generator())
    }

    fn cov_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.cov[0][0], self.cov[0][1], self.cov[1][0], self.cov[1][1])
    }

    /// Folds in linear-Gaussian increments. An empty slice returns the prior.
    pub fn update_with_increments(&self, increments: &[Increment]) -> Result<PosteriorState> {
        let mut out = self.clone();
        if increments.is_empty() {
            return Ok(out);
        }
        for inc in increments {
            if !(inc.duration > 0.0) {
                return Err(Error::InvalidLog(format!("non-positive interval length {}", inc.duration)));
            }
        }
        let prior_cov = self.cov_matrix();
        let mu0 = Vector2::new(self.mean[0], self.mean[1]);
        let g2 = self.gamma * self.gamma;

        let (mean, cov) = match prior_cov.try_inverse().filter(|p| well_conditioned(&prior_cov, p)) {
            // information form: robust for diffuse priors and precise data
            Some(prior_precision) => {
                let mut precision = prior_precision;
                let mut shift = prior_precision * mu0;
                for inc in increments {
                    let x = Vector2::new(inc.exposure, inc.duration);
                    let w = 1.0 / (g2 * inc.duration);
                    precision += x * x.transpose() * w;
                    shift += x * (inc.delta_accuracy * w);
                }
                let cov = precision
                    .try_inverse()
                    .ok_or_else(|| Error::Singular("posterior precision".into()))?;
                (cov * shift, cov)
            }
            // covariance form: handles degenerate (rank-deficient) priors
            None => {
                let mut mean = mu0;
                let mut cov = prior_cov;
                for inc in increments {
                    let x = Vector2::new(inc.exposure, inc.duration);
                    let r = g2 * inc.duration;
                    let s = (x.transpose() * cov * x)[0] + r;
                    if !(s > 0.0) {
                        return Err(Error::Singular("innovation variance is zero".into()));
                    }
                    let gain = cov * x / s;
                    mean += gain * (inc.delta_accuracy - x.dot(&mean));
                    let a = Matrix2::identity() - gain * x.transpose();
                    cov = a * cov * a.transpose() + gain * gain.transpose() * r;
                }
                (mean, cov)
            }
        };
        let off = 0.5 * (cov[(0, 1)] + cov[(1, 0)]);
        out.mean = [mean[0], mean[1]];
        out.cov = [[cov[(0, 0)], off], [off, cov[(1, 1)]]];
        out.validate()?;
        Ok(out)
    }

    /// Equal-tailed credible interval for `α` (index 0) or `β` (index 1).
    pub fn credible_interval(&self, index: usize, level: f64) -> (f64, f64) {
        let z = normal_quantile(0.5 + level / 2.0);
        let sd = self.cov[index][index].max(0.0).sqrt();
        (self.mean[index] - z * sd, self.mean[index] + z * sd)
    }
}

fn well_conditioned(m: &Matrix2<f64>, inv: &Matrix2<f64>) -> bool {
    let norm = m.abs().max();
    let inv_norm = inv.abs().max();
    norm > 0.0 && (norm * inv_norm) < 1e13 && inv_norm.is_finite()
}

/// Updates `prior` with every increment of `log` it has not seen yet.
pub fn update_posterior(prior: &PosteriorState, log: &InspectionLog, severity: &[f64]) -> Result<PosteriorState> {
    update_posterior_with(prior, log, severity, ChainUpdate::Online)
}

pub fn update_posterior_with(
    prior: &PosteriorState,
    log: &InspectionLog,
    severity: &[f64],
    chain: ChainUpdate,
) -> Result<PosteriorState> {
    log.validate()?;
    let from = prior.last_epoch.unwrap_or(0);
    if from >= log.epochs.len() {
        return Err(Error::InvalidLog(format!(
            "posterior has seen inspection {from} but the log holds {}",
            log.epochs.len()
        )));
    }
    let increments = log.increments_from(severity, from)?;
    let mut post = prior.update_with_increments(&increments)?;
    if chain == ChainUpdate::Online && !increments.is_empty() {
        let t0 = log.epochs[from].time;
        let t1 = log.last().time;
        post.ctmc_stats.observe(&log.task_history, t0, t1)?;
    }
    post.last_epoch = Some(log.epochs.len() - 1);
    Ok(post)
}

/// Method-of-moments diffusion estimate from historical logs.
///
/// Each log gets its own weighted least-squares drift fit; `γ̂²` is the
/// pooled sum of `r_k² / Δt_k` over the pooled residual degrees of freedom.
pub fn estimate_gamma(logs: &[InspectionLog], severity: &[f64]) -> Result<f64> {
    let mut total = 0usize;
    let mut weighted_rss = 0.0;
    let mut dof = 0usize;
    for log in logs {
        let incs = log.increments(severity)?;
        total += incs.len();
        if incs.len() < 2 {
            continue;
        }
        let (coef, rank) = fit_drift(&incs);
        weighted_rss += incs
            .iter()
            .map(|i| {
                let r = i.delta_accuracy - coef[0] * i.exposure - coef[1] * i.duration;
                r * r / i.duration
            })
            .sum::<f64>();
        dof += incs.len().saturating_sub(rank);
    }
    if total < 3 || dof == 0 {
        return Err(Error::InsufficientData(format!(
            "{total} increments leave {dof} residual degrees of freedom"
        )));
    }
    Ok((weighted_rss / dof as f64).sqrt())
}

/// Weighted least squares of `ΔA` on `(E, Δt)` with weights `1/Δt`;
/// returns the coefficients and the numerical rank of the design.
pub fn fit_drift(increments: &[Increment]) -> (Vector2<f64>, usize) {
    let mut xtx = Matrix2::zeros();
    let mut xty = Vector2::zeros();
    for i in increments {
        let x = Vector2::new(i.exposure, i.duration);
        let w = 1.0 / i.duration;
        xtx += x * x.transpose() * w;
        xty += x * (i.delta_accuracy * w);
    }
    let svd = xtx.svd(true, true);
    let smax = svd.singular_values.max();
    let eps = smax * 1e-12;
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let coef = svd.solve(&xty, eps).unwrap_or_else(|_| Vector2::zeros());
    (coef, rank)
}

/// Lower-triangular factor of a positive semi-definite 2×2 matrix.
fn cholesky_psd(c: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let scale = c[0][0].abs().max(c[1][1].abs());
    let tol = 1e-12 * scale;
    if c[0][0] < -tol || c[1][1] < -tol {
        return Err(Error::NotPositiveDefinite(format!("negative variance in {c:?}")));
    }
    let l11 = c[0][0].max(0.0).sqrt();
    let l21 = if l11 > 0.0 { c[1][0] / l11 } else { 0.0 };
    let rem = c[1][1] - l21 * l21;
    if rem < -tol || (l11 == 0.0 && c[1][0].abs() > tol) {
        return Err(Error::NotPositiveDefinite(format!("indefinite covariance {c:?}")));
    }
    Ok([[l11, 0.0], [l21, rem.max(0.0).sqrt()]])
}

/// One Monte-Carlo draw of the drift coefficients and chain rates.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterDraw {
    pub alpha: f64,
    pub beta: f64,
    pub chain: JumpChain,
}

pub(crate) struct ParameterSampler {
    mean: [f64; 2],
    chol: [[f64; 2]; 2],
    exit: Vec<Option<Gamma<f64>>>,
    jump_shapes: Vec<Vec<Option<Gamma<f64>>>>,
}

impl ParameterSampler {
    pub(crate) fn new(posterior: &PosteriorState) -> Result<Self> {
        let chol = cholesky_psd(&posterior.cov)?;
        let stats = &posterior.ctmc_stats;
        stats.validate()?;
        let n = stats.n_states();
        let gamma = |shape: f64, scale: f64| {
            Gamma::new(shape, scale).map_err(|e| Error::InvalidParameter(format!("gamma({shape}, {scale}): {e}")))
        };
        let mut exit = Vec::with_capacity(n);
        let mut jump_shapes = Vec::with_capacity(n);
        for i in 0..n {
            if n == 1 {
                exit.push(None);
                jump_shapes.push(vec![None]);
                continue;
            }
            let shape = stats.exits(i) + EXIT_RATE_PRIOR_SHAPE;
            let rate = stats.dwell[i] + EXIT_RATE_PRIOR_RATE;
            exit.push(Some(gamma(shape, 1.0 / rate)?));
            let row = (0..n)
                .map(|j| if j == i { Ok(None) } else { gamma(stats.counts[i][j] + 1.0, 1.0).map(Some) })
                .collect::<Result<Vec<_>>>()?;
            jump_shapes.push(row);
        }
        Ok(Self { mean: posterior.mean, chol, exit, jump_shapes })
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ParameterDraw {
        let z0: f64 = rng.sample(StandardNormal);
        let z1: f64 = rng.sample(StandardNormal);
        let l = self.chol;
        let alpha = self.mean[0] + l[0][0] * z0;
        let beta = self.mean[1] + l[1][0] * z0 + l[1][1] * z1;
        let n = self.exit.len();
        let mut exit_rates = vec![0.0; n];
        let mut jump_probs = vec![vec![0.0; n]; n];
        for i in 0..n {
            let Some(g) = &self.exit[i] else { continue };
            exit_rates[i] = g.sample(rng);
            let mut total = 0.0;
            for (j, d) in self.jump_shapes[i].iter().enumerate() {
                if let Some(d) = d {
                    let v = d.sample(rng);
                    jump_probs[i][j] = v;
                    total += v;
                }
            }
            if total > 0.0 {
                jump_probs[i].iter_mut().for_each(|p| *p /= total);
            } else {
                exit_rates[i] = 0.0;
            }
        }
        let chain = JumpChain::new(exit_rates, jump_probs).unwrap_or_else(|_| JumpChain::from_generator(&vec![vec![0.0; n]; n]));
        ParameterDraw { alpha, beta, chain }
    }
}

/// Draw `m` of the sample stream rooted at `seed`.
pub fn sample_parameter(posterior: &PosteriorState, seed: u64, m: u64) -> Result<ParameterDraw> {
    let sampler = ParameterSampler::new(posterior)?;
    let mut rng: SimRng = substream(seed, m);
    Ok(sampler.draw(&mut rng))
}

/// `count` posterior draws of `(α, β, q)`; draw `m` depends only on `(seed, m)`.
pub fn sample_parameters(posterior: &PosteriorState, count: usize, seed: u64) -> Result<Vec<ParameterDraw>> {
    if count == 0 {
        return Err(Error::InvalidParameter("at least one draw is required".into()));
    }
    let sampler = ParameterSampler::new(posterior)?;
    Ok((0..count as u64)
        .into_par_iter()
        .map(|m| sampler.draw(&mut substream(seed, m)))
        .collect())
}

/// Standard normal quantile by bisection on the cdf.
pub(crate) fn normal_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if crate::degradation::std_normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctmc::Segment;
    use approx::assert_abs_diff_eq;

    fn inc(delta_accuracy: f64, exposure: f64, duration: f64) -> Increment {
        Increment { delta_accuracy, exposure, duration }
    }

    fn prior(gamma: f64) -> PosteriorState {
        PosteriorState::diffuse(gamma, TransitionStats::empty(2)).unwrap()
    }

    #[test]
    fn empty_update_is_identity() {
        let p = prior(1.0);
        assert_eq!(p.update_with_increments(&[]).unwrap(), p);
    }

    #[test]
    fn precise_data_pins_the_drift() {
        let post = prior(1e-6).update_with_increments(&[inc(0.35, 3.0, 1.0), inc(0.15, 1.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(post.mean[0], 0.1, epsilon = 1e-6);
        assert_abs_diff_eq!(post.mean[1], 0.05, epsilon = 1e-6);
    }

    #[test]
    fn sequential_equals_batch() {
        let a = [inc(0.4, 3.2, 1.1), inc(0.2, 1.0, 0.9)];
        let b = [inc(0.9, 6.0, 2.0), inc(0.3, 1.4, 1.2)];
        let p = prior(0.2);
        let seq = p.update_with_increments(&a).unwrap().update_with_increments(&b).unwrap();
        let all: Vec<_> = a.iter().chain(&b).copied().collect();
        let batch = p.update_with_increments(&all).unwrap();
        for i in 0..2 {
            assert_abs_diff_eq!(seq.mean[i], batch.mean[i], epsilon = 1e-10);
            for j in 0..2 {
                assert_abs_diff_eq!(seq.cov[i][j], batch.cov[i][j], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn diffuse_posterior_matches_weighted_least_squares() {
        let incs = [inc(0.4, 3.2, 1.1), inc(0.2, 1.0, 0.9), inc(0.9, 6.0, 2.0), inc(0.3, 1.4, 1.2)];
        let post = prior(0.2).update_with_increments(&incs).unwrap();
        let (wls, rank) = fit_drift(&incs);
        assert_eq!(rank, 2);
        assert_abs_diff_eq!(post.mean[0], wls[0], epsilon = 1e-6);
        assert_abs_diff_eq!(post.mean[1], wls[1], epsilon = 1e-6);
    }

    #[test]
    fn degenerate_prior_stays_put() {
        let p = PosteriorState::new([0.1, 0.05], [[0.0; 2]; 2], 0.2, TransitionStats::empty(2)).unwrap();
        let post = p.update_with_increments(&[inc(1.0, 3.0, 1.0)]).unwrap();
        assert_eq!(post.mean, [0.1, 0.05]);
        assert_eq!(post.cov, [[0.0; 2]; 2]);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(PosteriorState::new([0.0; 2], [[1.0, 2.0], [2.0, 1.0]], 1.0, TransitionStats::empty(1)).is_err());
        assert!(PosteriorState::new([0.0; 2], [[1.0, 0.0], [0.0, 1.0]], 0.0, TransitionStats::empty(1)).is_err());
        assert!(prior(1.0).update_with_increments(&[inc(1.0, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn gamma_estimation_edge_cases() {
        let path = SeverityPath::new(vec![Segment { state: 0, start: 0.0, end: 10.0 }]).unwrap();
        let one = InspectionLog::new(
            vec![
                Inspection { epoch: 0, cycles: 0, time: 0.0, accuracy: 0.0 },
                Inspection { epoch: 1, cycles: 1, time: 1.0, accuracy: 0.3 },
            ],
            path.clone(),
            1,
        )
        .unwrap();
        assert!(matches!(estimate_gamma(&[one], &[1.0]), Err(Error::InsufficientData(_))));

        // noiseless linear growth
        let epochs = (0..6)
            .map(|k| Inspection { epoch: k, cycles: k as u64, time: k as f64, accuracy: 0.3 * k as f64 })
            .collect();
        let log = InspectionLog::new(epochs, path, 1).unwrap();
        assert!(estimate_gamma(&[log], &[1.0]).unwrap() < 1e-9);
    }

    #[test]
    fn degenerate_covariance_draws_the_mean() {
        let p = PosteriorState::new([0.1, 0.05], [[0.0; 2]; 2], 0.2, TransitionStats::empty(2)).unwrap();
        for d in sample_parameters(&p, 20, 3).unwrap() {
            assert_eq!((d.alpha, d.beta), (0.1, 0.05));
        }
        assert!(sample_parameters(&p, 0, 3).is_err());
    }

    #[test]
    fn draws_depend_only_on_seed_and_index() {
        let p = PosteriorState::new([0.1, 0.05], [[1e-4, 0.0], [0.0, 1e-4]], 0.2, TransitionStats::empty(2)).unwrap();
        let all = sample_parameters(&p, 16, 11).unwrap();
        assert_eq!(all[9], sample_parameter(&p, 11, 9).unwrap());
    }

    #[test]
    fn log_validation() {
        let path = SeverityPath::new(vec![Segment { state: 0, start: 0.0, end: 10.0 }]).unwrap();
        let bad = vec![
            Inspection { epoch: 0, cycles: 0, time: 0.0, accuracy: 0.0 },
            Inspection { epoch: 1, cycles: 3, time: 1.0, accuracy: 0.3 },
        ];
        assert!(InspectionLog::new(bad, path.clone(), 2).is_err());
        let backwards = vec![
            Inspection { epoch: 0, cycles: 0, time: 2.0, accuracy: 0.0 },
            Inspection { epoch: 1, cycles: 2, time: 1.0, accuracy: 0.3 },
        ];
        assert!(InspectionLog::new(backwards, path, 2).is_err());
    }

    #[test]
    fn normal_quantile_values() {
        assert_abs_diff_eq!(normal_quantile(0.975), 1.959963984540054, epsilon = 1e-9);
        assert_abs_diff_eq!(normal_quantile(0.5), 0.0, epsilon = 1e-12);
    }
}
