//! Building prudent-walk excursions out of corner-model excursions.
//!
//! A corner excursion that never reaches the accumulated length of the
//! opposite side is kept as it is; otherwise it is cut at the first time it
//! reaches one past that length, which is where the prudent walk leaves
//! through the far side.

use rand::Rng;
use thiserror::Error;

use super::excursion::ExcursionKind;
use crate::effective::{sample_corner_excursion, CornerExcursion, ExcursionEnd, IncrementSampler};

/// `H_k = Y_0 + ... + Y_{k-1}` and `W_k = X_0 + ... + X_k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CouplingState {
    pub heights: u64,
    pub widths: u64,
    /// Index of the next excursion pair.
    pub k: usize,
    pub next: Option<ExcursionKind>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledExcursion {
    pub kind: ExcursionKind,
    pub k: usize,
    /// Effective-walk values, ending at `-1` or, when truncated, at `level + 1`.
    pub values: Vec<i64>,
    pub displacement: u64,
    /// Maximum depth the corner excursion reached before its end (or the cut).
    pub reach: i64,
    /// Truncation level used: the accumulated opposite side.
    pub level: u64,
    pub truncated: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CouplingError {
    #[error("corner excursion neither exited nor reached depth {depth}")]
    Undetermined { depth: u64 },
    #[error("corner excursion {index} does not start at 0")]
    Malformed { index: usize },
}

/// Applies the truncation rule to a stream of alternating corner excursions,
/// starting with a vertical one.
#[derive(Debug, Clone, Default)]
pub struct Coupler {
    state: CouplingState,
}

impl Coupler {
    pub fn new() -> Self {
        Coupler { state: CouplingState { next: Some(ExcursionKind::Vertical), ..Default::default() } }
    }

    pub fn state(&self) -> CouplingState {
        self.state
    }

    /// Truncation level for the next excursion.
    pub fn level(&self) -> u64 {
        match self.state.next.unwrap_or(ExcursionKind::Vertical) {
            ExcursionKind::Vertical => self.state.heights,
            ExcursionKind::Horizontal => self.state.widths,
        }
    }

    /// Couples one corner excursion (values from 0, exited at -1 or stopped
    /// once they reach `level + 1`).
    pub fn push(&mut self, corner: &CornerExcursion) -> Result<CoupledExcursion, CouplingError> {
        let kind = self.state.next.unwrap_or(ExcursionKind::Vertical);
        let level = self.level();
        if corner.values.first() != Some(&0) {
            return Err(CouplingError::Malformed { index: self.state.k });
        }
        let cut = corner.values.iter().position(|&v| v > level as i64);
        let (values, truncated) = match (cut, corner.end) {
            (Some(i), _) => {
                let mut v = corner.values[..=i].to_vec();
                v[i] = level as i64 + 1;
                (v, true)
            }
            (None, ExcursionEnd::Exited) => (corner.values.clone(), false),
            (None, _) => return Err(CouplingError::Undetermined { depth: level + 1 }),
        };
        let reach = values[..values.len() - 1].iter().copied().max().unwrap_or(0).max(0);
        let displacement = values.len() as u64 - 1;
        let out = CoupledExcursion { kind, k: self.state.k, reach, values, displacement, level, truncated };
        match kind {
            ExcursionKind::Vertical => {
                self.state.widths += displacement;
                self.state.next = Some(ExcursionKind::Horizontal);
            }
            ExcursionKind::Horizontal => {
                self.state.heights += displacement;
                self.state.next = Some(ExcursionKind::Vertical);
                self.state.k += 1;
            }
        }
        Ok(out)
    }

    /// Draws the next corner excursion just far enough to decide it, and
    /// couples it.
    pub fn sample_next<S, R>(&mut self, sampler: &S, rng: &mut R, cap: u64) -> Result<CoupledExcursion, CouplingError>
    where
        S: IncrementSampler,
        R: Rng + ?Sized,
    {
        let depth = self.level() + 1;
        let corner = sample_corner_excursion(sampler, rng, Some(depth as i64), cap);
        self.push(&corner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::IncrementLaw;
    use crate::rng::seeded;

    #[test]
    fn no_dip_passes_through() {
        let mut c = Coupler::new();
        let e = c.push(&CornerExcursion::exited(vec![0, 0, 0, -1])).unwrap();
        assert!(!e.truncated);
        assert_eq!(e.values, vec![0, 0, 0, -1]);
        assert_eq!(e.displacement, 3);
        assert_eq!(c.state().widths, 3);
    }

    #[test]
    fn hand_truncation() {
        let mut c = Coupler::new();
        // First vertical excursion sees H_0 = 0: any dip is cut at depth 1.
        let e = c.push(&CornerExcursion::exited(vec![0, 0, 2, -1])).unwrap();
        assert!(e.truncated);
        assert_eq!(e.values, vec![0, 0, 1]);
        assert_eq!(e.displacement, 2);
        // Horizontal excursion of length 1 gives H_1 = 1.
        let h = c.push(&CornerExcursion::exited(vec![0, -1])).unwrap();
        assert_eq!(h.level, 2);
        assert_eq!(c.state().heights, 1);
        // Dipping 3 below its start when H_1 = 1: cut where depth reaches 2.
        let v = c.push(&CornerExcursion::exited(vec![0, 1, 3, 0, -1])).unwrap();
        assert_eq!(v.level, 1);
        assert!(v.truncated);
        assert_eq!(v.values, vec![0, 1, 2]);
        assert_eq!(v.displacement, 2);
    }

    #[test]
    fn lazy_sampling_decides() {
        let mut c = Coupler::new();
        let mut rng = seeded(4);
        for _ in 0..200 {
            let e = c.sample_next(&IncrementLaw, &mut rng, 1 << 40).unwrap();
            assert!(e.displacement >= 1);
            assert!(e.reach <= e.level as i64);
        }
        let s = c.state();
        assert!(s.heights >= 100 && s.widths >= 100);
    }
}
