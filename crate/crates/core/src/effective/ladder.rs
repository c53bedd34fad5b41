//! Alternating ladder times, overshoots and the overshoot-corrected walk `Ŝ`.

use super::path::EffectiveWalkPath;
use super::EffectiveError;

/// `τ_0 = 0 < τ_1 < ...` and `Δ_0 = 0, Δ_1, ...` (same length).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LadderDecomposition {
    pub ladder_times: Vec<usize>,
    pub overshoots: Vec<i64>,
}

impl LadderDecomposition {
    /// Number of completed ladder epochs (excluding `τ_0`).
    pub fn completed(&self) -> usize {
        self.ladder_times.len() - 1
    }
}

pub fn ladder_decompose(path: &EffectiveWalkPath) -> LadderDecomposition {
    ladder_decompose_values(path.values())
}

/// Odd epochs end at the first strict descent below the epoch's start, even
/// epochs at the first strict ascent.
pub fn ladder_decompose_values(values: &[i64]) -> LadderDecomposition {
    let mut ladder_times = vec![0];
    let mut overshoots = vec![0];
    let mut base = values[0];
    let mut descending = true;
    for (i, &v) in values.iter().enumerate().skip(1) {
        let done = if descending { v < base } else { v > base };
        if done {
            let target = if descending { -1 } else { 1 };
            overshoots.push(target - (v - base));
            ladder_times.push(i);
            base = v;
            descending = !descending;
        }
    }
    LadderDecomposition { ladder_times, overshoots }
}

/// `Ŝ_n = S_n + Σ_j Δ_j 1{τ_j ≤ n}` together with its ladder record and
/// microscopic clock `t(n) = Σ_{i ≤ n} (1 + |Ŝ_i − Ŝ_{i−1}|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatPath {
    values: Vec<i64>,
    ladder: LadderDecomposition,
    clock: Vec<u64>,
}

/// One complete excursion of `Ŝ` between consecutive ladder times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HatExcursion<'a> {
    /// Index of the ladder time the excursion starts at.
    pub start: usize,
    /// `Ŝ` values from `0` to `-1` (descending) or `-1` to `0` (ascending).
    pub values: &'a [i64],
    pub descending: bool,
}

pub fn hat_path(path: &EffectiveWalkPath) -> HatPath {
    let ladder = ladder_decompose(path);
    let mut values = Vec::with_capacity(path.values().len());
    let mut correction = 0;
    let mut next = 1;
    for (i, &s) in path.values().iter().enumerate() {
        if next < ladder.ladder_times.len() && ladder.ladder_times[next] == i {
            correction += ladder.overshoots[next];
            next += 1;
        }
        values.push(s + correction);
    }
    HatPath::assemble(values, ladder)
}

impl HatPath {
    fn assemble(values: Vec<i64>, ladder: LadderDecomposition) -> Self {
        let mut clock = Vec::with_capacity(values.len());
        clock.push(0);
        let mut t = 0u64;
        for w in values.windows(2) {
            t += 1 + w[1].abs_diff(w[0]);
            clock.push(t);
        }
        HatPath { values, ladder, clock }
    }

    /// Accepts `values` as a hat path if it starts at 0 and none of its own
    /// ladder epochs overshoots.
    pub fn from_values(values: Vec<i64>) -> Result<Self, EffectiveError> {
        if values.first() != Some(&0) {
            return Err(EffectiveError::NotAnchored);
        }
        let ladder = ladder_decompose_values(&values);
        if let Some(j) = ladder.overshoots.iter().position(|&d| d != 0) {
            return Err(EffectiveError::NotAHatPath { index: ladder.ladder_times[j] });
        }
        Ok(HatPath::assemble(values, ladder))
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn ladder(&self) -> &LadderDecomposition {
        &self.ladder
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() == 1
    }

    /// `t(n)`.
    pub fn microscopic_time(&self, n: usize) -> Result<u64, EffectiveError> {
        self.clock.get(n).copied().ok_or(EffectiveError::IndexOutOfRange { index: n, len: self.len() })
    }

    pub fn clock(&self) -> &[u64] {
        &self.clock
    }

    /// `n(t) = inf{n ≥ 0 : t(n) ≥ t}`.
    pub fn effective_index_of_time(&self, t: u64) -> Result<usize, EffectiveError> {
        let horizon = *self.clock.last().expect("nonempty");
        if t > horizon {
            return Err(EffectiveError::TimeBeyondHorizon { time: t, horizon });
        }
        Ok(self.clock.partition_point(|&c| c < t))
    }

    /// Number of ladder times where `Ŝ` is not `0` (even) or `-1` (odd).
    pub fn anchor_violations(&self) -> usize {
        self.ladder
            .ladder_times
            .iter()
            .enumerate()
            .filter(|&(j, &tau)| self.values[tau] != if j % 2 == 0 { 0 } else { -1 })
            .count()
    }

    /// Complete excursions between consecutive ladder times, in order.
    pub fn excursions(&self) -> impl Iterator<Item = HatExcursion<'_>> + '_ {
        self.ladder.ladder_times.windows(2).enumerate().map(move |(j, w)| HatExcursion {
            start: w[0],
            values: &self.values[w[0]..=w[1]],
            descending: j % 2 == 0,
        })
    }

    /// Index of the last ladder time; values after it form an unfinished excursion.
    pub fn last_ladder_time(&self) -> usize {
        *self.ladder.ladder_times.last().expect("τ_0 is always present")
    }
}
