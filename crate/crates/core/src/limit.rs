//! The limit process `Z^{σ1,σ2}`: Brownian paths, occupation times and the
//! angle law, plus their discrete counterparts on the effective walk.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::effective::{EffectiveWalkPath, HatPath, IncrementLaw};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitError {
    #[error("time step must be positive and at most the horizon")]
    BadStep,
    #[error("horizon {needed} exceeds the path horizon {available}")]
    HorizonTooShort { needed: f64, available: f64 },
    #[error("angle {0} is outside (0, pi/2)")]
    AngleDomain(f64),
    #[error("signs must be +1 or -1")]
    BadSign,
    #[error("index {index} is beyond the path length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("u grid must be increasing within [0, 1]")]
    BadGrid,
}

/// `W_0 = 0, W_dt, W_2dt, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    dt: f64,
    values: Vec<f64>,
}

impl BrownianPath {
    pub fn from_values(dt: f64, values: Vec<f64>) -> Result<Self, LimitError> {
        if !(dt > 0.0) || values.is_empty() {
            return Err(LimitError::BadStep);
        }
        Ok(BrownianPath { dt, values })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn horizon(&self) -> f64 {
        self.dt * (self.values.len() - 1) as f64
    }

    /// `W` at the grid time at or just before `s`.
    pub fn at(&self, s: f64) -> f64 {
        self.values[self.cells(s).0.min(self.values.len() - 1)]
    }

    /// Whole cells below `s` and the leftover fraction of the next one.
    fn cells(&self, s: f64) -> (usize, f64) {
        let ratio = s / self.dt;
        let mut k = ratio.floor();
        // Snap times that sit on the grid up to rounding.
        if ratio - k > 1.0 - 1e-9 {
            k += 1.0;
        }
        let k = (k.max(0.0) as usize).min(self.values.len() - 1);
        let rest = (s - k as f64 * self.dt).max(0.0);
        (k, rest)
    }
}

/// Exact Gaussian increments on a grid of spacing `dt` up to `horizon`.
pub fn sample_brownian<R: Rng + ?Sized>(dt: f64, horizon: f64, rng: &mut R) -> Result<BrownianPath, LimitError> {
    if !(dt > 0.0 && horizon >= dt) {
        return Err(LimitError::BadStep);
    }
    let steps = (horizon / dt - 1e-9).ceil() as usize;
    let sd = dt.sqrt();
    let mut values = Vec::with_capacity(steps + 1);
    let mut w = 0.0;
    values.push(w);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        w += sd * z;
        values.push(w);
    }
    Ok(BrownianPath { dt, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupationPair {
    pub theta_plus: f64,
    pub theta_minus: f64,
}

/// Left-endpoint quadrature of `∫_0^s 1{W ≥ 0}`; the last cell may be partial.
pub fn occupation_times(path: &BrownianPath, s: f64) -> Result<OccupationPair, LimitError> {
    check_horizon(path, s)?;
    let (k, rest) = path.cells(s);
    let full = path.values[..k].iter().filter(|&&w| w >= 0.0).count() as f64;
    let mut theta_plus = full * path.dt;
    if rest > 0.0 && path.values[k.min(path.values.len() - 1)] >= 0.0 {
        theta_plus += rest;
    }
    let theta_plus = theta_plus.min(s);
    Ok(OccupationPair { theta_plus, theta_minus: s - theta_plus })
}

fn check_horizon(path: &BrownianPath, s: f64) -> Result<(), LimitError> {
    let available = path.horizon();
    if s > available * (1.0 + 1e-12) + 1e-15 || s < 0.0 {
        return Err(LimitError::HorizonTooShort { needed: s, available });
    }
    Ok(())
}

/// A discretized trajectory of `Z_u`, `u` on a grid in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZProcessSample {
    pub sigma1: i8,
    pub sigma2: i8,
    pub u_grid: Vec<f64>,
    pub points: Vec<(f64, f64)>,
}

pub const SPEED: f64 = 3.0 / 7.0;

/// `Z_u = (σ1 θ⁺(W_[0,3u/7]), σ2 θ⁻(W_[0,3u/7]))` on `u_grid`.
pub fn z_process(path: &BrownianPath, sigma1: i8, sigma2: i8, u_grid: &[f64]) -> Result<ZProcessSample, LimitError> {
    if ![sigma1, sigma2].iter().all(|s| s.abs() == 1) {
        return Err(LimitError::BadSign);
    }
    if u_grid.windows(2).any(|w| w[1] <= w[0]) || u_grid.iter().any(|u| !(0.0..=1.0).contains(u)) {
        return Err(LimitError::BadGrid);
    }
    check_horizon(path, SPEED * u_grid.last().copied().unwrap_or(0.0))?;
    // Running count of nonnegative grid values, so each point costs O(1).
    let mut prefix = Vec::with_capacity(path.values.len() + 1);
    prefix.push(0u64);
    for &w in &path.values {
        prefix.push(prefix.last().unwrap() + (w >= 0.0) as u64);
    }
    let points = u_grid
        .iter()
        .map(|&u| {
            let s = SPEED * u;
            let (k, rest) = path.cells(s);
            let mut plus = prefix[k] as f64 * path.dt;
            if rest > 0.0 && path.values[k] >= 0.0 {
                plus += rest;
            }
            let plus = plus.min(s);
            (sigma1 as f64 * plus, sigma2 as f64 * (s - plus))
        })
        .collect();
    Ok(ZProcessSample { sigma1, sigma2, u_grid: u_grid.to_vec(), points })
}

/// `P(α ≤ x) = (2/π) arctan sqrt(tan x)` for the angle of `Z_u` with the
/// first axis.
pub fn angle_cdf(x: f64) -> Result<f64, LimitError> {
    if !(x > 0.0 && x < std::f64::consts::FRAC_PI_2) {
        return Err(LimitError::AngleDomain(x));
    }
    Ok(std::f64::consts::FRAC_2_PI * x.tan().sqrt().atan())
}

/// Like [`angle_cdf`] but defined on the closed interval, for KS tests.
pub fn angle_cdf_clamped(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= std::f64::consts::FRAC_PI_2 {
        1.0
    } else {
        std::f64::consts::FRAC_2_PI * x.tan().sqrt().atan()
    }
}

/// Classical arcsine law `(2/π) arcsin sqrt(x)`.
pub fn arcsine_cdf(x: f64) -> f64 {
    std::f64::consts::FRAC_2_PI * x.clamp(0.0, 1.0).sqrt().asin()
}

/// Discrete occupation counts, inclusive of index 0: `plus + minus = m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccupationCounts {
    pub plus: u64,
    pub minus: u64,
}

/// `Γ_m = θ⁺(Ŝ_[0,m]) e1 + θ⁻(Ŝ_[0,m]) e2`, counting indices `0..=m`.
pub fn discrete_gamma(hat: &HatPath, m: usize) -> Result<OccupationCounts, LimitError> {
    let values = hat.values();
    if m >= values.len() {
        return Err(LimitError::IndexOutOfRange { index: m, len: hat.len() });
    }
    let plus = values[..=m].iter().filter(|&&v| v >= 0).count() as u64;
    Ok(OccupationCounts { plus, minus: m as u64 + 1 - plus })
}

/// The same counts for a real path, `Z_m` of the diffusive embedding.
pub fn discrete_z(path: &BrownianPath, m: usize) -> Result<OccupationCounts, LimitError> {
    if m >= path.values.len() {
        return Err(LimitError::IndexOutOfRange { index: m, len: path.values.len() - 1 });
    }
    let plus = path.values[..=m].iter().filter(|&&v| v >= 0.0).count() as u64;
    Ok(OccupationCounts { plus, minus: m as u64 + 1 - plus })
}

/// Diffusive rescaling of the raw walk: `B_{i/n} = S_i / (σ sqrt(n))` with
/// `σ² = Var ξ` computed from the increment law. This is the matched-seed
/// stand-in for a strong coupling; it shares the seed of `path` by
/// construction.
pub fn diffusive_embedding(path: &EffectiveWalkPath) -> Result<BrownianPath, LimitError> {
    let n = path.len();
    if n == 0 {
        return Err(LimitError::BadStep);
    }
    let sigma = variance().sqrt();
    let scale = 1.0 / (sigma * (n as f64).sqrt());
    let values = path.values().iter().map(|&s| s as f64 * scale).collect();
    Ok(BrownianPath { dt: 1.0 / n as f64, values })
}

/// `Var ξ` of the increment law, as a float.
pub fn variance() -> f64 {
    use num_traits::ToPrimitive;
    IncrementLaw::variance().to_f64().expect("finite")
}
