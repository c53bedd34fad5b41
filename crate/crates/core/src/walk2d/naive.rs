//! Reference implementation of the step rule by scanning every visited site.

use super::index::Occupancy;
use crate::lattice::{Dir, DirSet, LatticePath, Site};

/// The visited set as a flat list; every query scans all of it.
#[derive(Debug, Clone, Default)]
pub struct NaiveOccupancy {
    xs: Vec<i32>,
    ys: Vec<i32>,
}

impl NaiveOccupancy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_path(path: &LatticePath) -> Self {
        let mut occ = Self::new();
        for &s in path.sites() {
            occ.insert(s);
        }
        occ
    }
}

impl Occupancy for NaiveOccupancy {
    fn insert(&mut self, site: Site) {
        self.xs.push(site.x);
        self.ys.push(site.y);
    }

    fn free_directions(&self, at: Site) -> DirSet {
        let (mut right, mut left, mut up, mut down) = (false, false, false, false);
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            let same_row = y == at.y;
            let same_col = x == at.x;
            right |= same_row & (x > at.x);
            left |= same_row & (x < at.x);
            up |= same_col & (y > at.y);
            down |= same_col & (y < at.y);
        }
        let mut set = DirSet::EMPTY;
        for (blocked, d) in [(right, Dir::Right), (left, Dir::Left), (up, Dir::Up), (down, Dir::Down)] {
            if !blocked {
                set = set.with(d);
            }
        }
        set
    }
}

/// Allowed directions at `position` given the visited sites of `path`,
/// by full scan; `obstacle` adds the south-west quadrant.
pub fn naive_allowed_directions(path: &LatticePath, position: Site, obstacle: bool) -> DirSet {
    let free = NaiveOccupancy::from_path(path).free_directions(position);
    if obstacle {
        DirSet::of(&free.iter().filter(|&d| !ray_meets_quadrant(position, d)).collect::<Vec<_>>())
    } else {
        free
    }
}

/// Whether `{at + k·d : k > 0}` meets `{x ≤ 0, y ≤ 0}`. Along a ray moving
/// in the negative sense the moving coordinate eventually drops below 0, so
/// only the fixed one matters; in the positive sense the first site is the
/// lowest one.
pub fn ray_meets_quadrant(at: Site, d: Dir) -> bool {
    let first = at.step(d);
    let (dx, dy) = d.delta();
    if dx < 0 || dy < 0 {
        if dx != 0 {
            at.y <= 0
        } else {
            at.x <= 0
        }
    } else {
        first.x <= 0 && first.y <= 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_scans() {
        let p = LatticePath::origin();
        assert_eq!(naive_allowed_directions(&p, Site::ORIGIN, false), DirSet::FULL);
        let p = LatticePath::from_steps([Dir::Right]);
        assert_eq!(naive_allowed_directions(&p, Site::new(1, 0), false), DirSet::of(&[Dir::Right, Dir::Up, Dir::Down]));
        assert_eq!(naive_allowed_directions(&p, Site::new(1, 0), true), DirSet::of(&[Dir::Right, Dir::Up, Dir::Down]));
        let p = LatticePath::from_steps([Dir::Right, Dir::Up, Dir::Left]);
        assert_eq!(naive_allowed_directions(&p, Site::new(0, 1), false), DirSet::of(&[Dir::Left, Dir::Up]));
    }

    #[test]
    fn quadrant_rays_match_index_geometry() {
        for x in -4..=4 {
            for y in -4..=4 {
                let at = Site::new(x, y);
                for d in Dir::ALL {
                    let scanned = (1..=20).any(|k| {
                        let (dx, dy) = d.delta();
                        at.x + k * dx <= 0 && at.y + k * dy <= 0
                    });
                    assert_eq!(ray_meets_quadrant(at, d), scanned, "{at:?} {d}");
                    assert_eq!(super::super::index::obstacle_free(at).contains(d), !scanned);
                }
            }
        }
    }
}
