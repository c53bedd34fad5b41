use rand::Rng;

use super::law::{IncrementLaw, IncrementSampler};
use super::EffectiveError;

/// `S_0 = 0, S_1, ..., S_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EffectiveWalkPath {
    values: Vec<i64>,
}

impl EffectiveWalkPath {
    pub fn new(values: Vec<i64>) -> Result<Self, EffectiveError> {
        if values.first() != Some(&0) {
            return Err(EffectiveError::NotAnchored);
        }
        Ok(EffectiveWalkPath { values })
    }

    pub fn from_increments<I: IntoIterator<Item = i64>>(increments: I) -> Self {
        let mut values = vec![0];
        let mut s = 0;
        for xi in increments {
            s += xi;
            values.push(s);
        }
        EffectiveWalkPath { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() == 1
    }

    pub fn increments(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }
}

pub fn simulate_effective_walk<R: Rng + ?Sized>(n: usize, rng: &mut R) -> EffectiveWalkPath {
    simulate_effective_walk_with(&IncrementLaw, n, rng)
}

pub fn simulate_effective_walk_with<S, R>(sampler: &S, n: usize, rng: &mut R) -> EffectiveWalkPath
where
    S: IncrementSampler,
    R: Rng + ?Sized,
{
    let mut values = Vec::with_capacity(n + 1);
    values.push(0);
    let mut s = 0;
    for _ in 0..n {
        s += sampler.sample(rng);
        values.push(s);
    }
    EffectiveWalkPath { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn empty_walk() {
        let p = simulate_effective_walk(0, &mut seeded(1));
        assert_eq!(p.values(), &[0]);
        assert!(p.is_empty());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = simulate_effective_walk(1000, &mut seeded(42));
        let b = simulate_effective_walk(1000, &mut seeded(42));
        assert_eq!(a, b);
        assert_ne!(a, simulate_effective_walk(1000, &mut seeded(43)));
    }

    #[test]
    fn diffusive_range() {
        // sd of S_n is 2·sqrt(n) = 2000; the max of |S| exceeds 10^3.5 ≈ 3162
        // with small probability, so count rather than demand all.
        let n = 1_000_000;
        let mut exceed = 0;
        for seed in 0..20 {
            let p = simulate_effective_walk(n, &mut seeded(seed));
            let max = p.values().iter().map(|v| v.abs()).max().unwrap();
            exceed += (max as f64 >= 10f64.powf(3.5) * 2.0) as u32;
        }
        assert!(exceed <= 1, "{exceed}");
    }

    #[test]
    fn increments_round_trip() {
        let p = EffectiveWalkPath::from_increments([2, -3, 0, 5]);
        assert_eq!(p.values(), &[0, 2, -1, -1, 4]);
        assert_eq!(p.increments().collect::<Vec<_>>(), vec![2, -3, 0, 5]);
        assert_eq!(EffectiveWalkPath::new(vec![1]), Err(EffectiveError::NotAnchored));
    }
}
