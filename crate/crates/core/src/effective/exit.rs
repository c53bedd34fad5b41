//! Exit times of the effective walk from `[0, L-1]` (or from `[0, ∞)`), the
//! exact transfer-matrix law of `η_L`, and corner-model excursions.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::law::{IncrementLaw, IncrementSampler};
use super::EffectiveError;

/// Width of the interval the walk must leave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Width {
    /// The interval `[0, L-1]`, `L ≥ 1`.
    Finite(u64),
    /// The half-line `[0, ∞)`: only leaving below counts.
    Infinite,
}

impl Width {
    #[inline]
    pub fn contains(self, value: i64) -> bool {
        match self {
            Width::Finite(l) => value >= 0 && value < l as i64,
            Width::Infinite => value >= 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExitSide {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitOutcome {
    pub exit_time: u64,
    pub side: ExitSide,
    pub final_value: i64,
}

/// Result of an exit-time simulation. Censoring is an outcome, not a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitResult {
    Exited(ExitOutcome),
    /// The walk was still inside after `steps` steps (cap reached or
    /// increment stream exhausted); `value` is its position then.
    Censored { steps: u64, value: i64 },
}

impl ExitResult {
    pub fn exited(self) -> Option<ExitOutcome> {
        match self {
            ExitResult::Exited(o) => Some(o),
            ExitResult::Censored { .. } => None,
        }
    }
}

/// Default censoring cap for `η_∞`, which has infinite mean.
pub const DEFAULT_CENSOR_CAP: u64 = 10_000_000;

fn check_width(width: Width, cap: Option<u64>) -> Result<(), EffectiveError> {
    match (width, cap) {
        (Width::Finite(0), _) => Err(EffectiveError::ZeroWidth),
        (Width::Infinite, None) => Err(EffectiveError::MissingCap),
        _ => Ok(()),
    }
}

/// Runs the walk from 0 on the supplied increments until it leaves the
/// interval, the cap is hit, or the increments run out.
pub fn exit_time_from_increments<I>(width: Width, increments: I, cap: Option<u64>) -> Result<ExitResult, EffectiveError>
where
    I: IntoIterator<Item = i64>,
{
    check_width(width, cap)?;
    let cap = cap.unwrap_or(u64::MAX);
    let mut value = 0i64;
    let mut steps = 0u64;
    for xi in increments {
        if steps == cap {
            break;
        }
        steps += 1;
        value += xi;
        if !width.contains(value) {
            let side = if value < 0 { ExitSide::Below } else { ExitSide::Above };
            return Ok(ExitResult::Exited(ExitOutcome { exit_time: steps, side, final_value: value }));
        }
    }
    Ok(ExitResult::Censored { steps, value })
}

/// Simulates `η_L` (or `η_∞` when `width` is infinite, which requires a cap).
pub fn exit_time<R: Rng + ?Sized>(width: Width, cap: Option<u64>, rng: &mut R) -> Result<ExitResult, EffectiveError> {
    exit_time_with(&IncrementLaw, width, cap, rng)
}

pub fn exit_time_with<S, R>(sampler: &S, width: Width, cap: Option<u64>, rng: &mut R) -> Result<ExitResult, EffectiveError>
where
    S: IncrementSampler,
    R: Rng + ?Sized,
{
    exit_time_from_increments(width, std::iter::repeat_with(|| sampler.sample(rng)), cap)
}

pub const ORACLE_MAX_WIDTH: u64 = 30;
pub const ORACLE_MAX_TIME: u64 = 200;

fn check_oracle_range(width: u64, time: u64) -> Result<(), EffectiveError> {
    if !(1..=ORACLE_MAX_WIDTH).contains(&width) || !(1..=ORACLE_MAX_TIME).contains(&time) {
        return Err(EffectiveError::OracleRange { width, time });
    }
    Ok(())
}

/// Exact `P(η_L = m)` for `m = 1..=m_max`.
///
/// Scaled by `3·2^(L-1)`, every transition weight of the substochastic kernel
/// on `[0, L-1]` is the integer `2^(L-1-|i-j|)` and the escape weight from `i`
/// is `2^(L-1-i) + 2^i`, so the recursion runs on big integers and a single
/// division per term gives the exact rational.
pub fn exit_time_pmf_series(width: u64, m_max: u64) -> Result<Vec<BigRational>, EffectiveError> {
    check_oracle_range(width, m_max)?;
    let l = width as usize;
    let weight = |d: usize| BigUint::from(1u8) << (l - 1 - d);
    let escape: Vec<BigUint> = (0..l)
        .map(|i| (BigUint::from(1u8) << (l - 1 - i)) + (BigUint::from(1u8) << i))
        .collect();
    let scale = BigUint::from(3u8) << (l - 1);

    let mut alive = vec![BigUint::zero(); l];
    alive[0] = BigUint::from(1u8);
    let mut denominator = BigUint::from(1u8);
    let mut out = Vec::with_capacity(m_max as usize);
    for _ in 0..m_max {
        denominator *= &scale;
        let numerator: BigUint = alive.iter().zip(&escape).map(|(a, e)| a * e).sum();
        out.push(BigRational::new(numerator.into(), denominator.clone().into()));
        let next: Vec<BigUint> = (0..l)
            .map(|j| alive.iter().enumerate().map(|(i, a)| a * weight(i.abs_diff(j))).sum())
            .collect();
        alive = next;
    }
    Ok(out)
}

/// Exact `P(η_L = m)`.
pub fn exit_time_pmf_exact(width: u64, time: u64) -> Result<BigRational, EffectiveError> {
    check_oracle_range(width, time)?;
    let series = exit_time_pmf_series(width, time)?;
    Ok(series.into_iter().last().expect("time ≥ 1"))
}

/// Floating-point view of the exact law, for use as chi-square expectations.
pub fn exit_time_pmf_f64(width: u64, m_max: u64) -> Result<Vec<f64>, EffectiveError> {
    Ok(exit_time_pmf_series(width, m_max)?
        .iter()
        .map(|p| p.to_f64().expect("probabilities are finite"))
        .collect())
}

/// One row of the golden-file table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmfRow {
    pub width: u64,
    pub time: u64,
    pub probability: BigRational,
}

/// Renders `P(η_L = m)`, `m = 1..=m_max`, as lines `L m prob_num prob_den`
/// with the fraction in lowest terms.
pub fn pmf_table(width: u64, m_max: u64) -> Result<String, EffectiveError> {
    let mut out = String::new();
    for (i, p) in exit_time_pmf_series(width, m_max)?.iter().enumerate() {
        writeln!(out, "{} {} {} {}", width, i + 1, p.numer(), p.denom()).expect("writing to a String");
    }
    Ok(out)
}

pub fn parse_pmf_table(text: &str) -> Result<Vec<PmfRow>, EffectiveError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |reason: &'static str| EffectiveError::Table { line: line_no, reason };
        if fields.len() != 4 {
            return Err(bad("expected four fields"));
        }
        let width = fields[0].parse().map_err(|_| bad("width is not an integer"))?;
        let time = fields[1].parse().map_err(|_| bad("time is not an integer"))?;
        let num: num_bigint::BigInt = fields[2].parse().map_err(|_| bad("numerator is not an integer"))?;
        let den: num_bigint::BigInt = fields[3].parse().map_err(|_| bad("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        rows.push(PmfRow { width, time, probability: BigRational::new(num, den) });
    }
    Ok(rows)
}

/// How a sampled corner excursion ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcursionEnd {
    /// Went below its start; the last value is the landing value `-1`.
    Exited,
    /// Reached the requested stop depth; later values were not generated.
    StoppedDeep,
    /// Hit the step cap while inside.
    Censored,
}

/// An excursion of the corner model in effective-walk form: `values[0] = 0`,
/// values stay `≥ 0` until the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerExcursion {
    pub values: Vec<i64>,
    pub end: ExcursionEnd,
}

impl CornerExcursion {
    /// An exited excursion from hand-written values (last value negative).
    pub fn exited(mut values: Vec<i64>) -> Self {
        if let Some(last) = values.last_mut() {
            if *last < 0 {
                *last = -1;
            }
        }
        CornerExcursion { values, end: ExcursionEnd::Exited }
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() <= 1
    }

    /// Maximum depth reached before the exit.
    pub fn reach(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0).max(0)
    }
}

/// Samples one excursion of the corner model: the walk from 0 until it first
/// goes negative, with the exit landing clipped to `-1`. Generation stops
/// early once the walk reaches `stop_depth`, or after `cap` steps.
pub fn sample_corner_excursion<S, R>(sampler: &S, rng: &mut R, stop_depth: Option<i64>, cap: u64) -> CornerExcursion
where
    S: IncrementSampler,
    R: Rng + ?Sized,
{
    let mut values = vec![0i64];
    let mut value = 0i64;
    for _ in 0..cap {
        value += sampler.sample(rng);
        if value < 0 {
            values.push(-1);
            return CornerExcursion { values, end: ExcursionEnd::Exited };
        }
        values.push(value);
        if stop_depth.is_some_and(|d| value >= d) {
            return CornerExcursion { values, end: ExcursionEnd::StoppedDeep };
        }
    }
    CornerExcursion { values, end: ExcursionEnd::Censored }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::stats::{chi_square, pool_tail};
    use num_bigint::BigInt;
    use num_traits::One;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn oracle_hand_values() {
        assert_eq!(exit_time_pmf_exact(1, 3).unwrap(), r(2, 27));
        assert_eq!(exit_time_pmf_exact(2, 1).unwrap(), r(1, 2));
        for m in 1..=30 {
            // L = 1: leave at the first nonzero increment.
            let expected = r(1, 3).pow(m as i32 - 1) * r(2, 3);
            assert_eq!(exit_time_pmf_exact(1, m).unwrap(), expected);
        }
    }

    /// Independent oracle: enumerate every increment sequence with bounded
    /// magnitudes. Paths that stay inside never use |ξ| ≥ L, and the exit step
    /// is summed through the exact tails.
    fn brute_force(width: i64, time: u32) -> BigRational {
        fn rec(width: i64, left: u32, value: i64) -> BigRational {
            if left == 1 {
                let below = IncrementLaw::lower_tail((value + 1) as u64);
                let above = IncrementLaw::lower_tail((width - value) as u64);
                return below + above;
            }
            let mut total = BigRational::zero();
            for next in 0..width {
                total += IncrementLaw::pmf(next - value) * rec(width, left - 1, next);
            }
            total
        }
        rec(width, time, 0)
    }

    #[test]
    fn oracle_matches_enumeration() {
        for width in 1..=4u64 {
            for time in 1..=6u64 {
                assert_eq!(exit_time_pmf_exact(width, time).unwrap(), brute_force(width as i64, time as u32), "L={width} m={time}");
            }
        }
    }

    #[test]
    fn oracle_mass_is_nearly_one() {
        for width in 1..=5 {
            let total: BigRational = exit_time_pmf_series(width, 200).unwrap().into_iter().sum();
            let deficit = BigRational::one() - total;
            assert!(deficit >= BigRational::zero());
            assert!(deficit < r(1, 1_000_000), "L={width}");
        }
    }

    #[test]
    fn oracle_rejects_out_of_range() {
        assert!(matches!(exit_time_pmf_exact(0, 1), Err(EffectiveError::OracleRange { .. })));
        assert!(exit_time_pmf_exact(31, 1).is_err());
        assert!(exit_time_pmf_exact(3, 0).is_err());
        assert!(exit_time_pmf_exact(3, 201).is_err());
        assert!(exit_time_pmf_exact(30, 200).is_ok());
    }

    #[test]
    fn table_round_trip() {
        let text = pmf_table(3, 12).unwrap();
        assert!(text.starts_with("3 1 "));
        let rows = parse_pmf_table(&text).unwrap();
        let series = exit_time_pmf_series(3, 12).unwrap();
        assert_eq!(rows.len(), 12);
        for (row, p) in rows.iter().zip(&series) {
            assert_eq!(&row.probability, p);
        }
        assert_eq!(parse_pmf_table("3 1 2").unwrap_err(), EffectiveError::Table { line: 1, reason: "expected four fields" });
        let l1 = pmf_table(1, 3).unwrap();
        assert_eq!(l1.lines().nth(2), Some("1 3 2 27"));
    }

    #[test]
    fn forced_increments() {
        let out = exit_time_from_increments(Width::Finite(3), [3], None).unwrap();
        assert_eq!(out, ExitResult::Exited(ExitOutcome { exit_time: 1, side: ExitSide::Above, final_value: 3 }));
        let out = exit_time_from_increments(Width::Finite(3), [2, 0, -3], None).unwrap();
        assert_eq!(out, ExitResult::Exited(ExitOutcome { exit_time: 3, side: ExitSide::Below, final_value: -1 }));
        let out = exit_time_from_increments(Width::Infinite, [5, 1, 1], Some(2)).unwrap();
        assert_eq!(out, ExitResult::Censored { steps: 2, value: 6 });
        assert_eq!(exit_time_from_increments(Width::Infinite, [1], None), Err(EffectiveError::MissingCap));
        assert_eq!(exit_time_from_increments(Width::Finite(0), [1], None), Err(EffectiveError::ZeroWidth));
    }

    #[test]
    fn width_one_is_geometric() {
        let mut rng = seeded(5);
        let n = 1_000_000usize;
        let probs = exit_time_pmf_f64(1, 60).unwrap();
        let mut counts = vec![0u64; probs.len() + 1];
        for _ in 0..n {
            let m = exit_time(Width::Finite(1), None, &mut rng).unwrap().exited().unwrap().exit_time as usize;
            counts[(m - 1).min(probs.len())] += 1;
        }
        let (obs, exp) = pool_tail(&counts, &probs, n as u64);
        let test = chi_square(&obs, &exp).unwrap();
        assert!(test.p_value > 0.01, "p = {}", test.p_value);
    }

    #[test]
    fn monte_carlo_matches_oracle() {
        let mut rng = seeded(99);
        let n = 200_000usize;
        for width in [1u64, 2, 3, 5, 10] {
            let probs = exit_time_pmf_f64(width, 50).unwrap();
            let mut counts = vec![0u64; probs.len() + 1];
            for _ in 0..n {
                let m = exit_time(Width::Finite(width), None, &mut rng).unwrap().exited().unwrap().exit_time as usize;
                counts[(m - 1).min(probs.len())] += 1;
            }
            let (obs, exp) = pool_tail(&counts, &probs, n as u64);
            let test = chi_square(&obs, &exp).unwrap();
            assert!(test.p_value > 0.01, "L={width} p={}", test.p_value);
        }
    }

    #[test]
    fn corner_excursions() {
        let mut rng = seeded(3);
        for _ in 0..1000 {
            let ex = sample_corner_excursion(&IncrementLaw, &mut rng, Some(5), 1_000_000);
            let (last, inner) = ex.values.split_last().unwrap();
            assert_eq!(ex.values[0], 0);
            assert!(inner.iter().all(|&v| (0..5).contains(&v)));
            match ex.end {
                ExcursionEnd::Exited => assert_eq!(*last, -1),
                ExcursionEnd::StoppedDeep => assert!(*last >= 5),
                ExcursionEnd::Censored => unreachable!(),
            }
        }
        let ex = sample_corner_excursion(&IncrementLaw, &mut rng, None, 0);
        assert_eq!(ex.end, ExcursionEnd::Censored);
        assert_eq!(CornerExcursion::exited(vec![0, 3, -4]).values, vec![0, 3, -1]);
    }
}
