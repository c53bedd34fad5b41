use serde::{Deserialize, Serialize};

use super::StatsError;

/// Mean with standard error and a normal 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

const Z_975: f64 = 1.959_963_984_540_054;

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Result<Self, StatsError> {
        if xs.len() < 2 {
            return Err(StatsError::TooFewSamples { needed: 2, got: xs.len() });
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let stderr = (var / n).sqrt();
        Ok(Estimate { mean, stderr, ci_low: mean - Z_975 * stderr, ci_high: mean + Z_975 * stderr, n: xs.len() })
    }
}

pub const SPEED_MIN_TRAJECTORIES: usize = 30;

/// Mean L¹ speed `‖γ_t‖₁ / t` from the endpoint norms of trajectories
/// observed at the common time `t`.
pub fn speed_estimate(l1_norms: &[u64], t: u64) -> Result<Estimate, StatsError> {
    if l1_norms.len() < SPEED_MIN_TRAJECTORIES {
        return Err(StatsError::TooFewSamples { needed: SPEED_MIN_TRAJECTORIES, got: l1_norms.len() });
    }
    assert!(t > 0, "speed needs a positive time");
    let speeds: Vec<f64> = l1_norms.iter().map(|&x| x as f64 / t as f64).collect();
    Estimate::from_samples(&speeds)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub n: usize,
}

pub const SLOPE_MIN_POINTS: usize = 4;

/// Least squares of `ln value` on `ln t`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<SlopeFit, StatsError> {
    if points.len() < SLOPE_MIN_POINTS {
        return Err(StatsError::TooFewSamples { needed: SLOPE_MIN_POINTS, got: points.len() });
    }
    if let Some(index) = points.iter().position(|&(t, v)| !(t > 0.0 && v > 0.0)) {
        return Err(StatsError::NonPositive { index });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, intercept, stderr, n: points.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|i| (10f64.powf(i as f64 / 2.0), 10f64.powf(i as f64 / 2.0).powf(0.75))).collect();
        let f = loglog_slope(&pts).unwrap();
        assert!((f.slope - 0.75).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, 3.0)).collect();
        assert!(loglog_slope(&flat).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = seeded(2);
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let t = 10f64.powf(1.0 + i as f64 * 0.15);
                (t, t.powf(-4.0 / 3.0) * (1.0 + 0.05 * (2.0 * rng.random::<f64>() - 1.0)))
            })
            .collect();
        let f = loglog_slope(&pts).unwrap();
        assert!((f.slope + 4.0 / 3.0).abs() < 0.1, "{f:?}");
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(loglog_slope(&[(1.0, 1.0); 3]), Err(StatsError::TooFewSamples { .. })));
        assert_eq!(loglog_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]), Err(StatsError::NonPositive { index: 1 }));
    }

    #[test]
    fn straight_line_speed() {
        let e = speed_estimate(&[10_000; 30], 10_000).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
        assert!(speed_estimate(&[1; 29], 1).is_err());
    }
}
