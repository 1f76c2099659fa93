//! Brownian degradation of position accuracy with severity-modulated drift.
//!
//! `dA = (α ψ(t) + β) dt + γ dW`. Failure is the first time `A` reaches the
//! threshold `D`.

mod inverse_gaussian;

pub use inverse_gaussian::InverseGaussian;
pub(crate) use inverse_gaussian::std_normal_cdf;

use crate::ctmc::SeverityPath;
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegradationModel {
    /// Drift per unit severity per hour.
    pub alpha: f64,
    /// Baseline drift per hour.
    pub beta: f64,
    /// Diffusion per √hour. Zero gives the deterministic limit.
    pub gamma: f64,
    pub threshold: f64,
    pub initial: f64,
}

impl DegradationModel {
    pub fn new(alpha: f64, beta: f64, gamma: f64, threshold: f64, initial: f64) -> Result<Self> {
        let m = Self { alpha, beta, gamma, threshold, initial };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::InvalidParameter("drift coefficients must be finite".into()));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("diffusion {} must be non-negative", self.gamma)));
        }
        if !(self.threshold > self.initial) || !self.initial.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "threshold {} must exceed the initial accuracy {}",
                self.threshold, self.initial
            )));
        }
        Ok(())
    }

    /// One exact increment over `duration` hours with integrated severity
    /// `exposure`.
    #[inline]
    pub fn increment<R: Rng + ?Sized>(&self, exposure: f64, duration: f64, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.alpha * exposure + self.beta * duration + self.gamma * duration.sqrt() * z
    }
}

/// `α ∫ψ + β (t1 − t0)` over `[t0, t1]`.
pub fn drift_integral(
    alpha: f64,
    beta: f64,
    path: &SeverityPath,
    severity: &[f64],
    t0: f64,
    t1: f64,
) -> Result<f64> {
    Ok(alpha * path.integrated_severity(severity, t0, t1)? + beta * (t1 - t0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub time: f64,
    pub accuracy: f64,
}

/// Accuracy sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DegradationPath {
    samples: Vec<PathSample>,
}

impl DegradationPath {
    pub fn new(samples: Vec<PathSample>) -> Result<Self> {
        if samples.len() >= 2 {
            let dt = samples[1].time - samples[0].time;
            for w in samples.windows(2) {
                let step = w[1].time - w[0].time;
                if step <= 0.0 {
                    return Err(Error::InvalidPath("times must be strictly increasing".into()));
                }
                if (step - dt).abs() > 1e-12 * dt.max(w[1].time.abs()).max(1.0) {
                    return Err(Error::InvalidPath(format!("non-uniform step at t={}", w[1].time)));
                }
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[PathSample] {
        &self.samples
    }

    pub fn terminal(&self) -> Option<PathSample> {
        self.samples.last().copied()
    }
}

/// Simulates the accuracy over the span of `severity_path` on a grid of
/// step `dt`. Drift within a step is integrated exactly; only the noise is
/// sampled.
pub fn simulate_degradation(
    model: &DegradationModel,
    severity_path: &SeverityPath,
    severity: &[f64],
    dt: f64,
    seed: u64,
) -> Result<DegradationPath> {
    model.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
    }
    if severity_path.is_empty() {
        return Err(Error::InvalidPath("severity path is empty".into()));
    }
    let start = severity_path.start();
    let ratio = severity_path.span() / dt;
    let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) { ratio.round() } else { ratio.floor() };
    let steps = steps as usize;

    let mut rng = crate::rng::seeded(seed);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut accuracy = model.initial;
    samples.push(PathSample { time: start, accuracy });
    for k in 0..steps {
        let t0 = start + k as f64 * dt;
        let t1 = start + (k + 1) as f64 * dt;
        let exposure = severity_path.integrated_severity(severity, t0, t1.min(severity_path.end()))?;
        accuracy += model.increment(exposure, t1 - t0, &mut rng);
        samples.push(PathSample { time: t1, accuracy });
    }
    Ok(DegradationPath { samples })
}

/// First time the path reaches `threshold`, linearly interpolated inside
/// the bracketing grid step.
pub fn first_passage(path: &DegradationPath, threshold: f64) -> Option<f64> {
    let samples = path.samples();
    let idx = samples.iter().position(|s| s.accuracy >= threshold)?;
    if idx == 0 {
        return Some(samples[0].time);
    }
    let (a, b) = (samples[idx - 1], samples[idx]);
    Some(crossing_time(a.time, a.accuracy, b.time, b.accuracy, threshold))
}

#[inline]
pub(crate) fn crossing_time(t0: f64, a0: f64, t1: f64, a1: f64, threshold: f64) -> f64 {
    let frac = ((threshold - a0) / (a1 - a0)).clamp(0.0, 1.0);
    t0 + frac * (t1 - t0)
}
