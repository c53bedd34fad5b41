//! The quadrant a walk settles in.

use serde::{Deserialize, Serialize};

use super::BoundingRect;
use crate::lattice::{Dir, LatticePath, Site};

/// Quadrants numbered counter-clockwise from `(+, +)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub fn from_signs(east: bool, north: bool) -> Quadrant {
        match (east, north) {
            (true, true) => Quadrant::Q1,
            (false, true) => Quadrant::Q2,
            (false, false) => Quadrant::Q3,
            (true, false) => Quadrant::Q4,
        }
    }

    /// `(σ1, σ2)`, the signs of the two coordinates in this quadrant.
    pub fn signs(self) -> (i8, i8) {
        match self {
            Quadrant::Q1 => (1, 1),
            Quadrant::Q2 => (-1, 1),
            Quadrant::Q3 => (-1, -1),
            Quadrant::Q4 => (1, -1),
        }
    }

    pub fn label(self) -> u8 {
        self as u8 + 1
    }
}

/// Tracks the last visit to a corner of a non-degenerate bounding rectangle,
/// and the signs of the first horizontal and vertical steps as a fallback.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadrantTracker {
    last_corner: Option<(Quadrant, u64)>,
    first_east: Option<bool>,
    first_north: Option<bool>,
}

impl QuadrantTracker {
    #[inline]
    pub fn observe(&mut self, time: u64, dir: Dir, at: Site, rect: &BoundingRect) {
        match dir {
            Dir::Right | Dir::Left if self.first_east.is_none() => self.first_east = Some(dir == Dir::Right),
            Dir::Up | Dir::Down if self.first_north.is_none() => self.first_north = Some(dir == Dir::Up),
            _ => {}
        }
        if rect.width() > 1 && rect.height() > 1 {
            let east = at.x == rect.x_max;
            let west = at.x == rect.x_min;
            let north = at.y == rect.y_max;
            let south = at.y == rect.y_min;
            if (east || west) && (north || south) {
                self.last_corner = Some((Quadrant::from_signs(east, north), time));
            }
        }
    }

    pub fn quadrant(&self) -> Quadrant {
        match self.last_corner {
            Some((q, _)) => q,
            None => Quadrant::from_signs(self.first_east.unwrap_or(true), self.first_north.unwrap_or(true)),
        }
    }

    pub fn last_corner_time(&self) -> Option<u64> {
        self.last_corner.map(|(_, t)| t)
    }
}

/// Quadrant of the corner occupied at the last corner visit of `path`.
pub fn settled_quadrant(path: &LatticePath) -> Quadrant {
    let mut rect = BoundingRect::origin();
    let mut tracker = QuadrantTracker::default();
    for (t, w) in path.sites().windows(2).enumerate() {
        rect.include(w[1]);
        tracker.observe(t as u64 + 1, Dir::between(w[0], w[1]).expect("unit steps"), w[1], &rect);
    }
    tracker.quadrant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Dir::*;

    #[test]
    fn staircases() {
        let p = LatticePath::from_steps([Right, Up, Right, Up, Right, Up]);
        assert_eq!(settled_quadrant(&p), Quadrant::Q1);
        let p = LatticePath::from_steps([Left, Down, Left, Down]);
        assert_eq!(settled_quadrant(&p), Quadrant::Q3);
        let p = LatticePath::from_steps([Right, Down, Down, Right]);
        assert_eq!(settled_quadrant(&p), Quadrant::Q4);
    }

    #[test]
    fn fallback_uses_first_steps() {
        assert_eq!(settled_quadrant(&LatticePath::from_steps([Left, Left])), Quadrant::Q2);
        assert_eq!(settled_quadrant(&LatticePath::origin()), Quadrant::Q1);
    }

    #[test]
    fn last_corner_wins() {
        // Ends at the top-left corner after passing the top-right one.
        let p = LatticePath::from_steps([Right, Up, Left, Left]);
        assert_eq!(settled_quadrant(&p), Quadrant::Q2);
    }
}
