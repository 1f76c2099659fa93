//! Inverse-Gaussian law of the first passage of a drifted Brownian motion.

use crate::error::{Error, Result};
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const QUANTILE_TOL: f64 = 1e-10;

/// `IG(mean, shape)`; both parameters in hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIg")]
pub struct InverseGaussian {
    mean: f64,
    shape: f64,
}

#[derive(Deserialize)]
struct RawIg {
    mean: f64,
    shape: f64,
}

impl TryFrom<RawIg> for InverseGaussian {
    type Error = Error;
    fn try_from(raw: RawIg) -> Result<Self> {
        InverseGaussian::new(raw.mean, raw.shape)
    }
}

impl InverseGaussian {
    pub fn new(mean: f64, shape: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::InvalidParameter(format!("inverse-Gaussian mean {mean} must be positive")));
        }
        if !(shape > 0.0) || shape.is_nan() {
            return Err(Error::InvalidParameter(format!("inverse-Gaussian shape {shape} must be positive")));
        }
        Ok(Self { mean, shape })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn variance(&self) -> f64 {
        self.mean.powi(3) / self.shape
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (mu, lambda) = (self.mean, self.shape);
        (lambda / (2.0 * PI * t.powi(3))).sqrt() * (-lambda * (t - mu).powi(2) / (2.0 * mu * mu * t)).exp()
    }

    /// `Φ(a) + e^{2λ/μ} Φ(-b)` with `a, b = √(λ/t)(t/μ ∓ 1)`.
    ///
    /// The second term is evaluated as `φ(a)·R(b)` (R the Mills ratio), which
    /// is algebraically identical because `b² − a² = 4λ/μ` and never forms
    /// the overflowing factor `e^{2λ/μ}`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::InvalidParameter(format!("cdf evaluated at negative time {t}")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if t.is_infinite() {
            return Ok(1.0);
        }
        let scale = (self.shape / t).sqrt();
        let a = scale * (t / self.mean - 1.0);
        let b = scale * (t / self.mean + 1.0);
        let value = std_normal_cdf(a) + std_normal_pdf(a) * mills_ratio(b);
        Ok(value.clamp(0.0, 1.0))
    }

    /// Inverse cdf by safeguarded Newton iteration on a bracketing interval.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("quantile level {p} outside (0, 1)")));
        }
        let cdf = |t: f64| self.cdf(t).unwrap_or(1.0);
        let mut hi = self.mean;
        while cdf(hi) < p {
            hi *= 2.0;
        }
        let mut lo = hi / 2.0;
        while lo > 0.0 && cdf(lo) > p {
            lo /= 2.0;
        }
        let mut t = self.mean.clamp(lo, hi);
        for _ in 0..500 {
            let f = cdf(t) - p;
            if f.abs() <= QUANTILE_TOL * 1e-2 {
                return Ok(t);
            }
            if f < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let density = self.pdf(t);
            let newton = t - f / density;
            t = if density > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        if (cdf(t) - p).abs() <= QUANTILE_TOL {
            Ok(t)
        } else {
            Err(Error::InvalidParameter(format!("quantile iteration did not converge at p={p}")))
        }
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    /// `n` draws by the Michael–Schucany–Haas transform.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = crate::rng::seeded(seed);
        let dist = rand_distr::InverseGaussian::new(self.mean, self.shape)
            .expect("parameters validated at construction");
        (0..n).map(|_| dist.sample(&mut rng)).collect()
    }
}

pub(crate) fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub(crate) fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Φ(-x) / φ(x)` for `x ≥ 0`.
fn mills_ratio(x: f64) -> f64 {
    if x < 25.0 {
        return 0.5 * libm::erfc(x * FRAC_1_SQRT_2) / std_normal_pdf(x);
    }
    // continued fraction 1/(x+1/(x+2/(x+3/(x+...))))
    let mut r = x;
    for k in (1..=60).rev() {
        r = x + k as f64 / r;
    }
    1.0 / r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn boundary_values() {
        let d = InverseGaussian::new(12.0, 36.0).unwrap();
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
        assert!((1.0 - d.cdf(1e6).unwrap()).abs() < 1e-9);
        assert!(d.cdf(-1.0).is_err());
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
        assert!(InverseGaussian::new(0.0, 1.0).is_err());
        assert!(InverseGaussian::new(1.0, -1.0).is_err());
    }

    #[test]
    fn mills_ratio_branches_agree() {
        let direct = 0.5 * libm::erfc(25.0 * FRAC_1_SQRT_2) / std_normal_pdf(25.0);
        let mut r = 25.0;
        for k in (1..=60).rev() {
            r = 25.0 + k as f64 / r;
        }
        assert_abs_diff_eq!(direct, 1.0 / r, epsilon = 1e-15);
    }

    #[test]
    fn huge_shape_does_not_overflow() {
        // e^{2λ/μ} alone would overflow here
        let d = InverseGaussian::new(1.0, 1e6).unwrap();
        assert_abs_diff_eq!(d.cdf(1.0).unwrap(), 0.5, epsilon = 1e-3);
        assert!(d.cdf(0.99).unwrap() < d.cdf(1.01).unwrap());
    }

    #[test]
    fn concentrated_limit_median_is_mean() {
        let d = InverseGaussian::new(12.0, 1e12).unwrap();
        assert_abs_diff_eq!(d.median(), 12.0, epsilon = 1e-4);
    }

    #[test]
    fn round_trip() {
        let d = InverseGaussian::new(12.0, 36.0).unwrap();
        for t in [6.0, 12.0, 24.0] {
            let p = d.cdf(t).unwrap();
            assert_abs_diff_eq!(d.quantile(p).unwrap(), t, epsilon = 1e-6);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let d = InverseGaussian::new(12.0, 36.0).unwrap();
        assert_eq!(d.sample(3, 10), d.sample(3, 10));
        assert_ne!(d.sample(3, 10), d.sample(4, 10));
    }
}
