use serde::{Deserialize, Serialize};

use super::StatsError;

/// Asymptotic 5% Kolmogorov-Smirnov coefficient.
pub const KS_C_05: f64 = 1.36;
pub const KS_MIN_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self, StatsError> {
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(StatsError::NotFinite { index });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted })
    }

    /// Right-continuous `F_n(x) = #{x_i ≤ x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d: f64,
    pub n: usize,
    /// `1.36 / sqrt(n)`.
    pub threshold: f64,
    pub pass: bool,
}

/// One-sample KS distance `sup |F_n − F|` and the asymptotic 5% verdict.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult, StatsError> {
    if samples.len() < KS_MIN_SAMPLES {
        return Err(StatsError::TooFewSamples { needed: KS_MIN_SAMPLES, got: samples.len() });
    }
    let ecdf = EmpiricalCdf::new(samples)?;
    Ok(ks_distance(&ecdf, cdf))
}

fn ks_distance<F: Fn(f64) -> f64>(ecdf: &EmpiricalCdf, cdf: F) -> KsResult {
    let n = ecdf.len();
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in ecdf.sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    let threshold = KS_C_05 / nf.sqrt();
    KsResult { d, n, threshold, pass: d < threshold }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn three_point_hand_fixture() {
        // Uniform cdf, samples 0.2, 0.5, 0.9: gaps are
        // 1/3-0.2, 0.2-0, 2/3-0.5, 0.5-1/3, 1-0.9, 0.9-2/3 → max 0.2333...
        let ecdf = EmpiricalCdf::new(&[0.9, 0.2, 0.5]).unwrap();
        let r = ks_distance(&ecdf, |x| x);
        assert!((r.d - (0.9 - 2.0 / 3.0)).abs() < 1e-12);
        assert_eq!(ecdf.eval(0.5), 2.0 / 3.0);
        assert_eq!(ecdf.eval(0.1), 0.0);
    }

    #[test]
    fn too_few() {
        assert_eq!(ks_statistic(&[0.5; 10], |x| x), Err(StatsError::TooFewSamples { needed: 50, got: 10 }));
    }

    #[test]
    fn null_calibration() {
        let mut rng = seeded(4);
        let trials = 1000;
        let mut passes = 0;
        for _ in 0..trials {
            let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
            passes += ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap().pass as u32;
        }
        assert!(passes as f64 / trials as f64 >= 0.94, "{passes}");
    }

    #[test]
    fn uniform_is_not_arcsine() {
        let mut rng = seeded(5);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        let arcsine = |x: f64| 2.0 / std::f64::consts::PI * x.clamp(0.0, 1.0).sqrt().asin();
        assert!(!ks_statistic(&xs, arcsine).unwrap().pass);
    }
}
