//! Per-row and per-column extrema of the visited set.
//!
//! A half-line from the walker along its row meets a visited site iff the
//! row's extreme visited abscissa on that side lies strictly beyond the
//! walker, so two extrema per line answer every direction query.

use crate::lattice::{Dir, DirSet, Site};

/// `[min, max]` of visited coordinates along one line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extent {
    pub min: i32,
    pub max: i32,
}

impl Extent {
    pub const EMPTY: Extent = Extent { min: i32::MAX, max: i32::MIN };

    #[inline]
    pub fn include(&mut self, v: i32) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }

    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }
}

/// A vector indexed by any `i32`, growing on demand in both directions.
#[derive(Debug, Clone)]
pub(crate) struct SignedVec<T> {
    neg: Vec<T>,
    pos: Vec<T>,
}

impl<T> Default for SignedVec<T> {
    fn default() -> Self {
        SignedVec { neg: Vec::new(), pos: Vec::new() }
    }
}

impl<T: Copy> SignedVec<T> {
    #[inline]
    pub(crate) fn get(&self, i: i32) -> Option<&T> {
        if i >= 0 {
            self.pos.get(i as usize)
        } else {
            self.neg.get((-1 - i) as usize)
        }
    }

    #[inline]
    pub(crate) fn get_or_insert(&mut self, i: i32, fill: T) -> &mut T {
        let (v, k) = if i >= 0 { (&mut self.pos, i as usize) } else { (&mut self.neg, (-1 - i) as usize) };
        if k >= v.len() {
            v.resize(k + 1, fill);
        }
        &mut v[k]
    }
}

/// Occupancy of the visited set, as needed by the step rule.
pub trait Occupancy {
    fn insert(&mut self, site: Site);
    /// Directions whose open half-line from `at` holds no visited site.
    fn free_directions(&self, at: Site) -> DirSet;
}

/// Row and column extrema: `rows[y]` brackets the visited `x` in row `y`,
/// `cols[x]` the visited `y` in column `x`.
#[derive(Debug, Clone, Default)]
pub struct OccupancyIndex {
    rows: SignedVec<Extent>,
    cols: SignedVec<Extent>,
}

impl OccupancyIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&self, y: i32) -> Extent {
        self.rows.get(y).copied().unwrap_or(Extent::EMPTY)
    }

    pub fn col(&self, x: i32) -> Extent {
        self.cols.get(x).copied().unwrap_or(Extent::EMPTY)
    }
}

impl Occupancy for OccupancyIndex {
    #[inline]
    fn insert(&mut self, site: Site) {
        self.rows.get_or_insert(site.y, Extent::EMPTY).include(site.x);
        self.cols.get_or_insert(site.x, Extent::EMPTY).include(site.y);
    }

    #[inline]
    fn free_directions(&self, at: Site) -> DirSet {
        let row = self.row(at.y);
        let col = self.col(at.x);
        let mut set = DirSet::EMPTY;
        if row.max <= at.x {
            set = set.with(Dir::Right);
        }
        if row.min >= at.x {
            set = set.with(Dir::Left);
        }
        if col.max <= at.y {
            set = set.with(Dir::Up);
        }
        if col.min >= at.y {
            set = set.with(Dir::Down);
        }
        set
    }
}

/// Directions whose half-line from `at` avoids the closed south-west
/// quadrant `{x ≤ 0, y ≤ 0}`.
#[inline]
pub fn obstacle_free(at: Site) -> DirSet {
    let mut set = DirSet::EMPTY;
    if !(at.y <= 0 && at.x < 0) {
        set = set.with(Dir::Right);
    }
    if at.y > 0 {
        set = set.with(Dir::Left);
    }
    if !(at.x <= 0 && at.y < 0) {
        set = set.with(Dir::Up);
    }
    if at.x > 0 {
        set = set.with(Dir::Down);
    }
    set
}
