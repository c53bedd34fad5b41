//! Estimators, goodness-of-fit tests and report plumbing.

mod chisq;
mod diagnostics;
mod fit;
mod gamma;
mod ks;
mod report;

use thiserror::Error;

pub use chisq::{chi_square, chi_square_counts, chi_square_homogeneity, pool_bins, pool_tail, ChiSquare};
pub use diagnostics::{sup_deviation_diagnostics, Diagnostics};
pub use fit::{loglog_slope, speed_estimate, Estimate, SlopeFit};
pub use gamma::{chi_square_sf, ln_gamma, regularized_gamma_p, regularized_gamma_q};
pub use ks::{ks_statistic, EmpiricalCdf, KsResult, KS_C_05};
pub use report::{render_table, Criterion, StatReport, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("bin {bin} has expected count {expected:.3} < 5; pool it first")]
    UnderPooled { bin: usize, expected: f64 },
    #[error("observed and expected have different lengths ({observed} vs {expected})")]
    LengthMismatch { observed: usize, expected: usize },
    #[error("point {index} has a nonpositive coordinate")]
    NonPositive { index: usize },
    #[error("sample {index} is not a finite number")]
    NotFinite { index: usize },
    #[error("paths cover different horizons ({left} vs {right})")]
    HorizonMismatch { left: usize, right: usize },
    #[error("no degrees of freedom left after pooling")]
    NoDegreesOfFreedom,
}
