//! Small sample-statistics helpers shared by the prediction and test code.

/// Kolmogorov–Smirnov distance between the empirical cdf of `sorted`
/// (ascending) out of `total` draws and `cdf`.
///
/// When `total` exceeds `sorted.len()` the remaining draws are treated as
/// censored at `limit`, and the distance is only taken up to `limit`.
pub fn ks_statistic(sorted: &[f64], total: usize, limit: Option<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 / n - f).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    if let Some(limit) = limit {
        d = d.max((sorted.len() as f64 / n - cdf(limit)).abs());
    }
    d
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Ordinary least-squares line through `(x, y)`: `(intercept, slope, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (my - slope * mx, slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_against_uniform() {
        let xs = [0.1, 0.4, 0.7];
        let d = ks_statistic(&xs, 3, None, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.3).abs() < 1e-12);
    }

    #[test]
    fn perfect_line() {
        let (a, b, r2) = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }
}
