use serde::{Deserialize, Serialize};

use crate::effective::{EffectiveWalkPath, HatPath};
use crate::limit::BrownianPath;

use super::report::{Criterion, StatReport};
use super::StatsError;

/// How far the overshoot-corrected walk strays from the raw walk and from a
/// matched diffusive path, all normalized by the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    /// `max_k |S_k − Ŝ_k| / sqrt(n)`.
    pub ladder_gap: f64,
    /// `sup_m |t(m) − (7/3) m| / n`.
    pub time_change_gap: f64,
    /// `sup_m |θ⁺(Ŝ_[0,m]) − θ⁺(B_[0,m])| / n`, counts inclusive of index 0.
    pub occupation_gap: f64,
}

pub fn sup_deviation_diagnostics(
    path: &EffectiveWalkPath,
    hat: &HatPath,
    matched: &BrownianPath,
) -> Result<Diagnostics, StatsError> {
    let n = path.len();
    if hat.len() != n {
        return Err(StatsError::HorizonMismatch { left: n, right: hat.len() });
    }
    if matched.values().len() != n + 1 {
        return Err(StatsError::HorizonMismatch { left: n, right: matched.values().len().saturating_sub(1) });
    }
    if n == 0 {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    let ladder = path.values().iter().zip(hat.values()).map(|(s, h)| s.abs_diff(*h)).max().unwrap_or(0);
    let mut time_gap = 0.0f64;
    for (m, &t) in hat.clock().iter().enumerate() {
        time_gap = time_gap.max((t as f64 - 7.0 * m as f64 / 3.0).abs());
    }
    let (mut hat_plus, mut bm_plus, mut occ_gap) = (0i64, 0i64, 0i64);
    for (h, b) in hat.values().iter().zip(matched.values()) {
        hat_plus += (*h >= 0) as i64;
        bm_plus += (*b >= 0.0) as i64;
        occ_gap = occ_gap.max((hat_plus - bm_plus).abs());
    }
    let nf = n as f64;
    Ok(Diagnostics {
        n,
        ladder_gap: ladder as f64 / nf.sqrt(),
        time_change_gap: time_gap / nf,
        occupation_gap: occ_gap as f64 / nf,
    })
}

impl Diagnostics {
    pub fn reports(&self) -> Vec<StatReport> {
        let n = self.n as u64;
        vec![
            StatReport::new(format!("max|S-Shat|/sqrt(n) n={n}"), self.ladder_gap, Criterion::Informational).samples(n),
            StatReport::new(format!("sup|t(m)-7m/3|/n n={n}"), self.time_change_gap, Criterion::Informational).samples(n),
            StatReport::new(format!("occupation gap n={n}"), self.occupation_gap, Criterion::Informational).samples(n),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::hat_path;
    use crate::limit::diffusive_embedding;

    #[test]
    fn ladder_free_prefix_has_no_gap() {
        // Stays nonnegative, so Ŝ = S.
        let p = EffectiveWalkPath::from_increments([1, 0, 2, -1, 3, 0, -2]);
        let h = hat_path(&p);
        let d = sup_deviation_diagnostics(&p, &h, &diffusive_embedding(&p).unwrap()).unwrap();
        assert_eq!(d.ladder_gap, 0.0);
        assert_eq!(d.occupation_gap, 0.0);
    }

    #[test]
    fn horizon_mismatch() {
        let p = EffectiveWalkPath::from_increments([1, 0, 2]);
        let q = EffectiveWalkPath::from_increments([1, 0]);
        let e = sup_deviation_diagnostics(&p, &hat_path(&q), &diffusive_embedding(&p).unwrap());
        assert_eq!(e, Err(StatsError::HorizonMismatch { left: 3, right: 2 }));
    }
}
