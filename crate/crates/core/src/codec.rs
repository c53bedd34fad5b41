//! Translation between one effective-walk excursion and the lattice steps of
//! the corresponding rectangle excursion.
//!
//! Effective step `i` is drawn as one step in the `forward` direction
//! followed by `|S_i − S_{i−1}|` steps along the transverse axis, towards
//! `positive` when the increment is positive. The final increment leaves the
//! wall interval and is clipped so that the walk lands exactly one site
//! outside: at `-1`, or at `h` for a finite wall of length `h`. Anything it
//! would have jumped further is dropped on the lattice side.

use thiserror::Error;

use crate::lattice::{Axis, Dir};

/// Orientation of an excursion on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frame {
    pub forward: Dir,
    pub positive: Dir,
}

impl Frame {
    /// Vertical excursions of the corner model: run right along the top of
    /// the south-west quadrant, depth measured downwards.
    pub const CORNER_VERTICAL: Frame = Frame { forward: Dir::Right, positive: Dir::Down };
    /// Horizontal excursions of the corner model: run up, depth measured to the left.
    pub const CORNER_HORIZONTAL: Frame = Frame { forward: Dir::Up, positive: Dir::Left };

    pub fn new(forward: Dir, positive: Dir) -> Frame {
        assert_ne!(forward.axis(), positive.axis(), "frame axes must differ");
        Frame { forward, positive }
    }

    pub const fn transpose(self) -> Frame {
        Frame { forward: self.forward.transpose(), positive: self.positive.transpose() }
    }

    /// The corner-model frame of a descending (`0 → -1`) or ascending hat
    /// excursion, for a walk whose first step lies on `first_axis`.
    pub fn corner(descending: bool, first_axis: Axis) -> Frame {
        let frame = if descending { Frame::CORNER_VERTICAL } else { Frame::CORNER_HORIZONTAL };
        match first_axis {
            Axis::Horizontal => frame,
            Axis::Vertical => frame.transpose(),
        }
    }
}

/// Length of the wall the excursion runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wall {
    Finite(u64),
    Infinite,
}

impl Wall {
    #[inline]
    fn inside(self, v: i64) -> bool {
        v >= 0
            && match self {
                Wall::Finite(h) => (v as u64) < h,
                Wall::Infinite => true,
            }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("effective excursion must start at 0")]
    NotAnchored,
    #[error("effective excursion leaves the wall interval before its last value (index {index})")]
    EarlyExit { index: usize },
    #[error("effective excursion never leaves the wall interval")]
    NoExit,
    #[error("step {index}: expected a forward step")]
    ExpectedForward { index: usize },
    #[error("step {index}: moves against the forward direction")]
    Backward { index: usize },
    #[error("step {index}: reverses a transverse run")]
    Reversal { index: usize },
    #[error("step {index}: leaves the wall interval before the segment ends")]
    ExitBeforeEnd { index: usize },
    #[error("segment of {index} steps ends without leaving the wall interval")]
    Incomplete { index: usize },
}

/// Lattice steps of the excursion `values` (`values[0] = 0`, all but the
/// last value inside the wall interval, the last one outside).
pub fn encode_excursion(values: &[i64], frame: Frame, wall: Wall) -> Result<Vec<Dir>, CodecError> {
    if values.first() != Some(&0) {
        return Err(CodecError::NotAnchored);
    }
    let last = values.len() - 1;
    if let Some(index) = (1..last).find(|&i| !wall.inside(values[i])) {
        return Err(CodecError::EarlyExit { index });
    }
    if last == 0 || wall.inside(values[last]) {
        return Err(CodecError::NoExit);
    }
    let mut steps = Vec::new();
    for i in 1..=last {
        let mut target = values[i];
        if i == last {
            target = if target < 0 {
                -1
            } else {
                match wall {
                    Wall::Finite(h) => h as i64,
                    Wall::Infinite => unreachable!("inside an infinite wall"),
                }
            };
        }
        let delta = target - values[i - 1];
        let dir = if delta > 0 { frame.positive } else { frame.positive.opposite() };
        steps.push(frame.forward);
        steps.extend(std::iter::repeat_n(dir, delta.unsigned_abs() as usize));
    }
    Ok(steps)
}

/// Inverse of [`encode_excursion`]; errors carry the index of the first
/// offending step.
pub fn decode_excursion(steps: &[Dir], frame: Frame, wall: Wall) -> Result<Vec<i64>, CodecError> {
    let mut values = vec![0i64];
    let mut value = 0i64;
    // Transverse direction of the current run, if any.
    let mut run: Option<Dir> = None;
    for (index, &d) in steps.iter().enumerate() {
        if index == 0 && d != frame.forward {
            return Err(CodecError::ExpectedForward { index });
        }
        if d == frame.forward {
            if index > 0 {
                values.push(value);
            }
            run = None;
            continue;
        }
        if d == frame.forward.opposite() {
            return Err(CodecError::Backward { index });
        }
        if run.is_some_and(|r| r != d) {
            return Err(CodecError::Reversal { index });
        }
        run = Some(d);
        value += if d == frame.positive { 1 } else { -1 };
        if !wall.inside(value) {
            if index + 1 != steps.len() {
                return Err(CodecError::ExitBeforeEnd { index });
            }
            values.push(value);
            return Ok(values);
        }
    }
    Err(CodecError::Incomplete { index: steps.len() })
}
