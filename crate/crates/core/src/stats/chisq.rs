use serde::{Deserialize, Serialize};

use super::gamma::chi_square_sf;
use super::StatsError;

pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub sample_size: u64,
}

/// Pearson goodness of fit of `observed` counts against cell probabilities.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> Result<ChiSquare, StatsError> {
    if observed.len() != probs.len() {
        return Err(StatsError::LengthMismatch { observed: observed.len(), expected: probs.len() });
    }
    let n: u64 = observed.iter().sum();
    let expected: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
    chi_square_counts(observed, &expected, observed.len().saturating_sub(1))
}

/// Pearson statistic against expected counts with an explicit dof.
pub fn chi_square_counts(observed: &[u64], expected: &[f64], dof: usize) -> Result<ChiSquare, StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::LengthMismatch { observed: observed.len(), expected: expected.len() });
    }
    if let Some(bin) = expected.iter().position(|&e| e < MIN_EXPECTED) {
        return Err(StatsError::UnderPooled { bin, expected: expected[bin] });
    }
    if dof == 0 {
        return Err(StatsError::NoDegreesOfFreedom);
    }
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum::<f64>();
    Ok(ChiSquare { statistic, dof, p_value: chi_square_sf(statistic, dof), sample_size: observed.iter().sum() })
}

/// Merges every cell whose expected count `n·p` is below 5 into one pooled
/// cell (appended last). If the pooled cell is itself too small it is folded
/// into the last surviving cell.
pub fn pool_bins(observed: &[u64], probs: &[f64], n: u64) -> (Vec<u64>, Vec<f64>) {
    let mut obs = Vec::new();
    let mut p = Vec::new();
    let (mut pooled_obs, mut pooled_p) = (0u64, 0.0f64);
    for (&o, &q) in observed.iter().zip(probs) {
        if q * n as f64 >= MIN_EXPECTED {
            obs.push(o);
            p.push(q);
        } else {
            pooled_obs += o;
            pooled_p += q;
        }
    }
    if pooled_p * n as f64 >= MIN_EXPECTED || obs.is_empty() {
        obs.push(pooled_obs);
        p.push(pooled_p);
    } else if pooled_obs > 0 || pooled_p > 0.0 {
        *obs.last_mut().expect("nonempty") += pooled_obs;
        *p.last_mut().expect("nonempty") += pooled_p;
    }
    (obs, p)
}

/// `counts` has one more entry than `probs`: the overflow beyond the table,
/// whose probability is the remaining mass. Sparse cells are pooled.
pub fn pool_tail(counts: &[u64], probs: &[f64], n: u64) -> (Vec<u64>, Vec<f64>) {
    assert_eq!(counts.len(), probs.len() + 1);
    let tail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    let mut all = probs.to_vec();
    all.push(tail);
    pool_bins(counts, &all, n)
}

/// Two-sample chi-square test of homogeneity over shared categories. Cells
/// where either sample's expected count is below 5 are pooled together.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<ChiSquare, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch { observed: a.len(), expected: b.len() });
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let small = na.min(nb) / total;
    let mut cells: Vec<(u64, u64)> = Vec::new();
    let mut pooled = (0u64, 0u64);
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        if (x + y) as f64 * small >= MIN_EXPECTED {
            cells.push((x, y));
        } else {
            pooled.0 += x;
            pooled.1 += y;
        }
    }
    if (pooled.0 + pooled.1) as f64 * small >= MIN_EXPECTED || cells.is_empty() {
        cells.push(pooled);
    } else if let Some(last) = cells.last_mut() {
        last.0 += pooled.0;
        last.1 += pooled.1;
    }
    let mut statistic = 0.0;
    for &(x, y) in &cells {
        let col = (x + y) as f64;
        for (o, n) in [(x, na), (y, nb)] {
            let e = n * col / total;
            if e < MIN_EXPECTED {
                return Err(StatsError::UnderPooled { bin: cells.len(), expected: e });
            }
            statistic += (o as f64 - e).powi(2) / e;
        }
    }
    let dof = cells.len().saturating_sub(1);
    if dof == 0 {
        return Err(StatsError::NoDegreesOfFreedom);
    }
    Ok(ChiSquare { statistic, dof, p_value: chi_square_sf(statistic, dof), sample_size: total as u64 })
}
