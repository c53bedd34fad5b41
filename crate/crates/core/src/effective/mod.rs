//! The effective one-dimensional random walk: increments, exit times,
//! ladder/overshoot decomposition, the `Ŝ` process and its lattice embedding.

mod embed;
pub mod exit;
mod ladder;
pub mod law;
mod path;

use thiserror::Error;

pub use embed::{hat_to_corner_path, CornerEmbedding};
pub use exit::{
    exit_time, exit_time_from_increments, exit_time_pmf_exact, exit_time_pmf_f64, exit_time_pmf_series, exit_time_with,
    parse_pmf_table, pmf_table, sample_corner_excursion, CornerExcursion, ExcursionEnd, ExitOutcome, ExitResult, ExitSide,
    PmfRow, Width, DEFAULT_CENSOR_CAP,
};
pub use ladder::{hat_path, ladder_decompose, ladder_decompose_values, HatExcursion, HatPath, LadderDecomposition};
pub use law::{IncrementLaw, IncrementSampler};
pub use path::{simulate_effective_walk, simulate_effective_walk_with, EffectiveWalkPath};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EffectiveError {
    #[error("interval width must be at least 1")]
    ZeroWidth,
    #[error("an infinite interval needs a step cap")]
    MissingCap,
    #[error("exact oracle supports 1 <= L <= 30 and 1 <= m <= 200, got L = {width}, m = {time}")]
    OracleRange { width: u64, time: u64 },
    #[error("pmf table line {line}: {reason}")]
    Table { line: usize, reason: &'static str },
    #[error("index {index} is beyond the path length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("time {time} is beyond the horizon {horizon}")]
    TimeBeyondHorizon { time: u64, horizon: u64 },
    #[error("effective paths start at 0")]
    NotAnchored,
    #[error("not an overshoot-free path: ladder epoch ending at index {index} overshoots")]
    NotAHatPath { index: usize },
}
