//! Splitting a trajectory into vertical and horizontal excursions.
//!
//! `T_0 = 0`. The vertical excursion `(T_k, U_k]` runs until the height of
//! the bounding rectangle grows at time `U_k + 1`; the horizontal excursion
//! `(U_k, T_{k+1}]` runs until the width grows at time `T_{k+1} + 1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{transpose_path, BoundingRect, Variant};
use crate::codec::{decode_excursion, CodecError, Frame, Wall};
use crate::effective::{EffectiveError, HatPath};
use crate::lattice::{Axis, Dir, LatticePath, Site};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExcursionKind {
    /// Travels along a horizontal side; its displacement `X_k` is width growth.
    Vertical,
    /// Travels along a vertical side; its displacement `Y_k` is height growth.
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcursionRecord {
    pub k: usize,
    pub kind: ExcursionKind,
    /// `T_k` or `U_k`.
    pub start: u64,
    /// `U_k` or `T_{k+1}`.
    pub end: u64,
    /// `X_k` or `Y_k`.
    pub displacement: u64,
    /// `H_{T_k}` or `W_{U_k}`; `None` for the infinite walls of the corner model.
    pub wall: Option<u64>,
    /// The excursion ends on the opposite corner of the side it runs along.
    pub crossed: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExcursionError {
    #[error("path must start with a horizontal step")]
    VerticalFirstStep,
    #[error("excursion {excursion}: {source}")]
    Codec { excursion: usize, source: CodecError },
    #[error(transparent)]
    Hat(#[from] EffectiveError),
}

/// Side of the rectangle the walker sits on, along the transverse axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Low,
    High,
    Both,
}

#[derive(Debug, Clone, Copy)]
struct Phase {
    kind: ExcursionKind,
    start: u64,
    wall: Option<u64>,
    side: Side,
    /// Extent along the forward axis when the excursion started.
    extent: i64,
}

/// Online excursion decomposition: feed sites one at a time.
#[derive(Debug, Clone)]
pub struct ExcursionTracker {
    variant: Variant,
    rect: BoundingRect,
    pos: Site,
    time: u64,
    k: usize,
    phase: Phase,
}

impl ExcursionTracker {
    pub fn new(variant: Variant) -> Self {
        let wall = (variant == Variant::Prudent).then_some(1);
        let rect = BoundingRect::origin();
        let mut tracker = ExcursionTracker {
            variant,
            rect,
            pos: Site::ORIGIN,
            time: 0,
            k: 0,
            phase: Phase { kind: ExcursionKind::Vertical, start: 0, wall, side: Side::Both, extent: 0 },
        };
        tracker.phase.extent = tracker.extent(Axis::Horizontal);
        tracker
    }

    /// Extent along `axis`: the side length for the prudent walk, the
    /// position of the growing side for the corner model.
    fn extent(&self, axis: Axis) -> i64 {
        let r = &self.rect;
        match (self.variant, axis) {
            (Variant::Prudent, Axis::Horizontal) => r.width() as i64,
            (Variant::Prudent, Axis::Vertical) => r.height() as i64,
            (Variant::Corner, Axis::Horizontal) => r.x_max as i64,
            (Variant::Corner, Axis::Vertical) => r.y_max as i64,
        }
    }

    fn grew(&self, s: Site, axis: Axis) -> Option<Side> {
        let r = &self.rect;
        let (v, lo, hi) = match axis {
            Axis::Horizontal => (s.x, r.x_min, r.x_max),
            Axis::Vertical => (s.y, r.y_min, r.y_max),
        };
        if v > hi {
            Some(Side::High)
        } else if v < lo && self.variant == Variant::Prudent {
            Some(Side::Low)
        } else {
            None
        }
    }

    fn side(&self, axis: Axis) -> Side {
        let r = &self.rect;
        let (v, lo, hi) = match axis {
            Axis::Horizontal => (self.pos.x, r.x_min, r.x_max),
            Axis::Vertical => (self.pos.y, r.y_min, r.y_max),
        };
        match (v == lo, v == hi) {
            (true, true) => Side::Both,
            (true, false) => Side::Low,
            _ => Side::High,
        }
    }

    /// Number of sites fed so far minus one.
    pub fn time(&self) -> u64 {
        self.time
    }

    /// Feeds the next site; returns the excursion it closes, if any.
    pub fn push(&mut self, s: Site) -> Option<ExcursionRecord> {
        let (transverse, forward_axis) = match self.phase.kind {
            ExcursionKind::Vertical => (Axis::Vertical, Axis::Horizontal),
            ExcursionKind::Horizontal => (Axis::Horizontal, Axis::Vertical),
        };
        let mut closed = None;
        if let Some(end_side) = self.grew(s, transverse) {
            let displacement = (self.extent(forward_axis) - self.phase.extent) as u64;
            let crossed = self.phase.wall.is_some_and(|w| w > 1) && self.phase.side != end_side;
            let record = ExcursionRecord {
                k: self.k,
                kind: self.phase.kind,
                start: self.phase.start,
                end: self.time,
                displacement,
                wall: self.phase.wall,
                crossed,
            };
            let next_kind = match self.phase.kind {
                ExcursionKind::Vertical => ExcursionKind::Horizontal,
                ExcursionKind::Horizontal => {
                    self.k += 1;
                    ExcursionKind::Vertical
                }
            };
            let wall = match (self.variant, next_kind) {
                (Variant::Corner, _) => None,
                (Variant::Prudent, ExcursionKind::Horizontal) => Some(self.rect.width()),
                (Variant::Prudent, ExcursionKind::Vertical) => Some(self.rect.height()),
            };
            self.phase = Phase {
                kind: next_kind,
                start: self.time,
                wall,
                side: self.side(forward_axis),
                extent: self.extent(transverse),
            };
            closed = Some(record);
        }
        self.rect.include(s);
        self.pos = s;
        self.time += 1;
        closed
    }
}

/// Excursions of a prudent-walk trajectory, in time order.
pub fn excursion_decompose(path: &LatticePath) -> Result<Vec<ExcursionRecord>, ExcursionError> {
    excursion_decompose_as(path, Variant::Prudent)
}

/// Excursions under the rules of `variant`; corner-model walls are infinite
/// and only growth past the north and east sides counts.
pub fn excursion_decompose_as(path: &LatticePath, variant: Variant) -> Result<Vec<ExcursionRecord>, ExcursionError> {
    if path.steps().next().is_some_and(|d| d.axis() == Axis::Vertical) {
        return Err(ExcursionError::VerticalFirstStep);
    }
    let mut tracker = ExcursionTracker::new(variant);
    Ok(path.sites()[1..].iter().filter_map(|&s| tracker.push(s)).collect())
}

/// Recomputes the crossing flag of `record` from the path alone: the side
/// the walker starts on versus the side it leaves through.
pub fn detect_crossing(record: &ExcursionRecord, path: &LatticePath) -> bool {
    let sites = path.sites();
    let start = record.start as usize;
    let end = record.end as usize;
    let mut at_start = BoundingRect::origin();
    for &s in &sites[..=start] {
        at_start.include(s);
    }
    let mut at_end = at_start;
    for &s in &sites[start..=end] {
        at_end.include(s);
    }
    let (here, exit) = (sites[start], sites[end + 1]);
    let (lo, hi, v, out) = match record.kind {
        ExcursionKind::Vertical => (at_start.y_min, at_start.y_max, here.y, exit.y > at_end.y_max),
        ExcursionKind::Horizontal => (at_start.x_min, at_start.x_max, here.x, exit.x > at_end.x_max),
    };
    if lo == hi || record.wall.is_none() {
        return false;
    }
    let starts_high = v == hi;
    starts_high != out
}

/// Lattice steps of one excursion (from its start through the growth step
/// that closes it) with the frame and wall needed to decode them.
pub fn excursion_segment(path: &LatticePath, record: &ExcursionRecord) -> (Vec<Dir>, Frame, Wall) {
    let steps: Vec<Dir> = path.steps().skip(record.start as usize).take((record.end - record.start + 1) as usize).collect();
    let Some(wall) = record.wall else {
        let frame = Frame::corner(record.kind == ExcursionKind::Vertical, Axis::Horizontal);
        return (steps, frame, Wall::Infinite);
    };
    let mut rect = BoundingRect::origin();
    for &s in &path.sites()[..=record.start as usize] {
        rect.include(s);
    }
    let here = path.sites()[record.start as usize];
    let positive = match record.kind {
        ExcursionKind::Vertical if here.y == rect.y_min && rect.y_min != rect.y_max => Dir::Up,
        ExcursionKind::Vertical => Dir::Down,
        ExcursionKind::Horizontal if here.x == rect.x_min && rect.x_min != rect.x_max => Dir::Right,
        ExcursionKind::Horizontal => Dir::Left,
    };
    (steps.clone(), Frame::new(steps[0], positive), Wall::Finite(wall))
}

/// Effective-walk values of one lattice excursion.
pub fn excursion_to_effective(steps: &[Dir], frame: Frame, wall: Wall) -> Result<Vec<i64>, CodecError> {
    decode_excursion(steps, frame, wall)
}

/// Reads the hat path back off a corner-model trajectory: each complete
/// excursion is decoded, horizontal ones mirrored to `-1 → 0`. An unfinished
/// trailing excursion is ignored.
pub fn corner_path_to_hat(path: &LatticePath) -> Result<HatPath, ExcursionError> {
    let transposed;
    let path = if path.steps().next().is_some_and(|d| d.axis() == Axis::Vertical) {
        transposed = transpose_path(path);
        &transposed
    } else {
        path
    };
    let records = excursion_decompose_as(path, Variant::Corner)?;
    let mut hat = vec![0i64];
    for (i, r) in records.iter().enumerate() {
        let (steps, frame, wall) = excursion_segment(path, r);
        let values = excursion_to_effective(&steps, frame, wall).map_err(|source| ExcursionError::Codec { excursion: i, source })?;
        match r.kind {
            ExcursionKind::Vertical => hat.extend_from_slice(&values[1..]),
            ExcursionKind::Horizontal => hat.extend(values[1..].iter().map(|v| -1 - v)),
        }
    }
    Ok(HatPath::from_values(hat)?)
}

impl ExcursionRecord {
    pub const CSV_HEADER: &'static str = "k,kind,start,end,displacement,wall,crossed";

    pub fn to_csv(&self) -> String {
        let kind = match self.kind {
            ExcursionKind::Vertical => "vertical",
            ExcursionKind::Horizontal => "horizontal",
        };
        let wall = self.wall.map_or_else(|| "inf".to_string(), |w| w.to_string());
        format!("{},{},{},{},{},{},{}", self.k, kind, self.start, self.end, self.displacement, wall, self.crossed)
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return Err(format!("expected 7 fields, got {}", f.len()));
        }
        let num = |i: usize| f[i].parse::<u64>().map_err(|e| format!("field {}: {e}", i + 1));
        let kind = match f[1] {
            "vertical" => ExcursionKind::Vertical,
            "horizontal" => ExcursionKind::Horizontal,
            other => return Err(format!("unknown kind {other:?}")),
        };
        Ok(ExcursionRecord {
            k: num(0)? as usize,
            kind,
            start: num(2)?,
            end: num(3)?,
            displacement: num(4)?,
            wall: if f[5] == "inf" { None } else { Some(num(5)?) },
            crossed: f[6].parse().map_err(|e| format!("field 7: {e}"))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::{hat_path, hat_to_corner_path, simulate_effective_walk};
    use crate::rng::seeded;
    use crate::walk2d::{simulate, FirstStep};
    use Dir::*;

    #[test]
    fn first_height_growth() {
        let p = LatticePath::from_steps([Right, Up]);
        let r = excursion_decompose(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].kind, r[0].start, r[0].end, r[0].displacement), (ExcursionKind::Vertical, 0, 1, 1));
        assert_eq!(r[0].wall, Some(1));
        assert!(!r[0].crossed);
        assert_eq!(excursion_decompose(&LatticePath::from_steps([Up])), Err(ExcursionError::VerticalFirstStep));
    }

    #[test]
    fn crossing_fixture() {
        // Height-2 rectangle (0,0)-(1,1); from the top-left corner the walker
        // steps left and drops straight across to below the bottom side.
        let p = LatticePath::from_steps([Right, Up, Left, Left, Down, Down]);
        let r = excursion_decompose(&p).unwrap();
        assert_eq!(r.len(), 3);
        let v1 = r[2];
        assert_eq!((v1.kind, v1.start, v1.end, v1.wall, v1.displacement), (ExcursionKind::Vertical, 3, 5, Some(2), 1));
        assert!(v1.crossed);
        assert!(detect_crossing(&v1, &p));
        // Same walk turning back up instead stays on its side.
        let p = LatticePath::from_steps([Right, Up, Left, Left, Up]);
        let r = excursion_decompose(&p).unwrap();
        assert!(!r[2].crossed && !detect_crossing(&r[2], &p));
    }

    #[test]
    fn records_tile_and_agree_with_recomputation() {
        for seed in 0..20 {
            let p = simulate(5_000, seed, Variant::Prudent, FirstStep::Forced(Right));
            let recs = excursion_decompose(&p).unwrap();
            let mut prev_end = 0;
            for (i, r) in recs.iter().enumerate() {
                assert!(r.displacement >= 1);
                assert_eq!(r.start, prev_end);
                prev_end = r.end;
                assert_eq!(r.kind, if i % 2 == 0 { ExcursionKind::Vertical } else { ExcursionKind::Horizontal });
                assert_eq!(r.crossed, detect_crossing(r, &p));
                let (steps, frame, wall) = excursion_segment(&p, r);
                let values = excursion_to_effective(&steps, frame, wall).unwrap();
                assert_eq!(values.len() as u64 - 1, r.displacement);
                let last = *values.last().unwrap();
                assert_eq!(r.crossed, last >= 0 && r.wall.unwrap() > 1);
            }
        }
    }

    #[test]
    fn corner_round_trip() {
        for seed in 0..1000 {
            let p = simulate_effective_walk(200, &mut seeded(seed));
            let hat = hat_path(&p);
            let complete = HatPath::from_values(hat.values()[..=hat.last_ladder_time()].to_vec()).unwrap();
            let axis = if seed % 2 == 0 { Axis::Horizontal } else { Axis::Vertical };
            let lattice = hat_to_corner_path(&hat, axis).path;
            assert_eq!(corner_path_to_hat(&lattice).unwrap().values(), complete.values(), "seed {seed}");
        }
    }

    #[test]
    fn seven_step_excursion() {
        let steps = [Right, Down, Down, Right, Up, Up, Up];
        let v = excursion_to_effective(&steps, Frame::CORNER_VERTICAL, Wall::Infinite).unwrap();
        assert_eq!(v, vec![0, 2, -1]);
        let v = excursion_to_effective(&[Right, Up], Frame::CORNER_VERTICAL, Wall::Infinite).unwrap();
        assert_eq!(v.len() - 1, 1);
    }

    #[test]
    fn csv_round_trip() {
        let r = ExcursionRecord { k: 3, kind: ExcursionKind::Horizontal, start: 10, end: 19, displacement: 4, wall: Some(7), crossed: true };
        assert_eq!(ExcursionRecord::from_csv(&r.to_csv()), Ok(r));
        let c = ExcursionRecord { wall: None, crossed: false, ..r };
        assert_eq!(ExcursionRecord::from_csv(&c.to_csv()), Ok(c));
        assert!(ExcursionRecord::from_csv("1,2").is_err());
    }
}
