//! The two-sided geometric increment law `P(ξ = k) = (1/3)(1/2)^|k|`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

/// Anything that can draw effective-walk increments.
///
/// [`IncrementLaw`] is the only law used by the simulators; the trait exists
/// so that the verification suite can swap in a perturbed law and check that
/// it notices.
pub trait IncrementSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64;
}

/// The fixed increment law of the effective random walk.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IncrementLaw;

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

impl IncrementLaw {
    /// `P(ξ = k)` as an exact rational.
    pub fn pmf(k: i64) -> BigRational {
        let den = BigInt::from(3) << (k.unsigned_abs() as usize);
        BigRational::new(BigInt::one(), den)
    }

    pub fn pmf_f64(k: i64) -> f64 {
        (1.0 / 3.0) * 0.5f64.powi(k.unsigned_abs().min(2000) as i32)
    }

    /// `P(ξ ≤ -a)` for `a ≥ 1`, which equals `(1/3)(1/2)^(a-1)`.
    pub fn lower_tail(a: u64) -> BigRational {
        assert!(a >= 1);
        BigRational::new(BigInt::one(), BigInt::from(3) << ((a - 1) as usize))
    }

    /// `Σ_{|k| ≤ bound} P(ξ = k)`, exactly.
    pub fn truncated_mass(bound: u64) -> BigRational {
        let mut sum = Self::pmf(0);
        for k in 1..=bound as i64 {
            sum += Self::pmf(k) * big(2);
        }
        sum
    }

    /// Exact tail mass beyond `bound`: `1 - truncated_mass(bound) = (2/3)(1/2)^bound`.
    pub fn tail_mass(bound: u64) -> BigRational {
        BigRational::new(big(2), BigInt::from(3) << (bound as usize))
    }

    /// `E|ξ|`, from the closed form `Σ_{k≥1} k x^k = x/(1-x)²` at `x = 1/2`.
    pub fn mean_abs() -> BigRational {
        let x = ratio(1, 2);
        let one_minus = BigRational::one() - &x;
        let series = &x / (&one_minus * &one_minus);
        ratio(2, 3) * series
    }

    /// `E[ξ²]`, from `Σ_{k≥1} k² x^k = x(1+x)/(1-x)³` at `x = 1/2`.
    pub fn second_moment() -> BigRational {
        let x = ratio(1, 2);
        let one_minus = BigRational::one() - &x;
        let series = &x * (BigRational::one() + &x) / (&one_minus * &one_minus * &one_minus);
        ratio(2, 3) * series
    }

    /// `Var ξ`; the law is symmetric so this equals the second moment.
    pub fn variance() -> BigRational {
        Self::second_moment() - Self::mean() * Self::mean()
    }

    pub fn mean() -> BigRational {
        BigRational::zero()
    }

    /// Exact partial sum `Σ_{|k| ≤ bound} |k|^power P(ξ = k)`.
    pub fn truncated_abs_moment(power: u32, bound: u64) -> BigRational {
        let mut sum = BigRational::zero();
        for k in 1..=bound as i64 {
            sum += Self::pmf(k) * big(2) * BigRational::from_integer(big(k).pow(power));
        }
        if power == 0 {
            sum += Self::pmf(0);
        }
        sum
    }
}

/// Draws a geometric magnitude on `{1, 2, ...}` with `P(j) = (1/2)^j`.
#[inline]
fn geometric_half<R: RngCore + ?Sized>(rng: &mut R) -> (bool, i64) {
    let bits = rng.next_u64();
    let negative = bits >> 63 == 1;
    let mut rest = bits & (u64::MAX >> 1);
    let mut extra = 0i64;
    if rest == 0 {
        // 63 consecutive zero bits; keep flipping fresh words.
        extra = 63;
        loop {
            rest = rng.next_u64();
            if rest != 0 {
                break;
            }
            extra += 64;
        }
    }
    (negative, 1 + extra + rest.trailing_zeros() as i64)
}

impl IncrementSampler for IncrementLaw {
    /// Sign-and-geometric composition: zero with probability 1/3, otherwise a
    /// uniform sign times a geometric magnitude.
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        if rng.random_ratio(1, 3) {
            return 0;
        }
        let (negative, magnitude) = geometric_half(rng);
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// A deliberately wrong law (geometric magnitudes with continuation
/// probability `continue_prob` instead of 1/2). Only used to check that the
/// verification suite rejects a tampered increment law.
#[doc(hidden)]
#[derive(Debug, Clone, Copy)]
pub struct PerturbedLaw {
    pub continue_prob: f64,
}

impl IncrementSampler for PerturbedLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        if rng.random_ratio(1, 3) {
            return 0;
        }
        let mut magnitude = 1;
        while rng.random_bool(self.continue_prob) {
            magnitude += 1;
        }
        if rng.random_bool(0.5) {
            -magnitude
        } else {
            magnitude
        }
    }
}
