//! The axis-prudent walk on Z³: a step is forbidden when a visited site lies
//! on the open half-line in that direction.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::lattice::{rle_decode, rle_encode, PathError};
use crate::rng::seeded;
use crate::walk2d::Extent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site3 {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Site3 {
    pub const ORIGIN: Site3 = Site3 { x: 0, y: 0, z: 0 };

    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Site3 { x, y, z }
    }

    #[inline]
    pub fn step(self, d: Dir3) -> Site3 {
        let (dx, dy, dz) = d.delta();
        Site3::new(self.x + dx, self.y + dy, self.z + dz)
    }

    pub fn l2_norm(self) -> f64 {
        let (x, y, z) = (self.x as f64, self.y as f64, self.z as f64);
        (x * x + y * y + z * z).sqrt()
    }
}

/// The six unit directions; letters `X x Y y Z z` for `±e1, ±e2, ±e3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir3 {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
    ZPlus,
    ZMinus,
}

impl Dir3 {
    pub const ALL: [Dir3; 6] = [Dir3::XPlus, Dir3::XMinus, Dir3::YPlus, Dir3::YMinus, Dir3::ZPlus, Dir3::ZMinus];

    #[inline]
    pub const fn delta(self) -> (i32, i32, i32) {
        match self {
            Dir3::XPlus => (1, 0, 0),
            Dir3::XMinus => (-1, 0, 0),
            Dir3::YPlus => (0, 1, 0),
            Dir3::YMinus => (0, -1, 0),
            Dir3::ZPlus => (0, 0, 1),
            Dir3::ZMinus => (0, 0, -1),
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Dir3::XPlus => 'X',
            Dir3::XMinus => 'x',
            Dir3::YPlus => 'Y',
            Dir3::YMinus => 'y',
            Dir3::ZPlus => 'Z',
            Dir3::ZMinus => 'z',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir3> {
        Dir3::ALL.into_iter().find(|d| d.letter() == c)
    }

    pub fn between(a: Site3, b: Site3) -> Option<Dir3> {
        Dir3::ALL.into_iter().find(|&d| a.step(d) == b)
    }
}

impl fmt::Display for Dir3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if (*self as u8) % 2 == 0 { '+' } else { '-' };
        write!(f, "{sign}e{}", *self as u8 / 2 + 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DirSet3(u8);

impl DirSet3 {
    pub const EMPTY: DirSet3 = DirSet3(0);
    pub const FULL: DirSet3 = DirSet3(0b11_1111);

    pub fn of(dirs: &[Dir3]) -> DirSet3 {
        dirs.iter().fold(DirSet3::EMPTY, |s, &d| s.with(d))
    }

    #[inline]
    pub const fn with(self, d: Dir3) -> DirSet3 {
        DirSet3(self.0 | 1 << d as u8)
    }

    #[inline]
    pub const fn contains(self, d: Dir3) -> bool {
        self.0 & (1 << d as u8) != 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn nth(self, i: usize) -> Option<Dir3> {
        let mut bits = self.0;
        for _ in 0..i {
            bits &= bits.wrapping_sub(1);
        }
        (bits != 0).then(|| Dir3::ALL[bits.trailing_zeros() as usize])
    }

    pub fn iter(self) -> impl Iterator<Item = Dir3> {
        Dir3::ALL.into_iter().filter(move |d| self.contains(*d))
    }
}

impl fmt::Debug for DirSet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|d| d.to_string())).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath3D {
    sites: Vec<Site3>,
}

impl LatticePath3D {
    pub fn new(sites: Vec<Site3>) -> Result<Self, PathError> {
        match sites.first() {
            None => return Err(PathError::Empty),
            Some(&s) if s != Site3::ORIGIN => return Err(PathError::NotAtOrigin),
            _ => {}
        }
        if let Some(index) = sites.windows(2).position(|w| Dir3::between(w[0], w[1]).is_none()) {
            return Err(PathError::NotUnitStep { index });
        }
        Ok(LatticePath3D { sites })
    }

    pub fn from_steps<I: IntoIterator<Item = Dir3>>(steps: I) -> Self {
        let mut sites = vec![Site3::ORIGIN];
        let mut here = Site3::ORIGIN;
        for d in steps {
            here = here.step(d);
            sites.push(here);
        }
        LatticePath3D { sites }
    }

    pub fn sites(&self) -> &[Site3] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.sites.len() == 1
    }

    pub fn endpoint(&self) -> Site3 {
        *self.sites.last().expect("nonempty")
    }

    pub fn steps(&self) -> impl Iterator<Item = Dir3> + '_ {
        self.sites.windows(2).map(|w| Dir3::between(w[0], w[1]).expect("validated"))
    }

    pub fn to_rle(&self) -> String {
        rle_encode(self.steps().map(Dir3::letter))
    }

    pub fn from_rle(s: &str) -> Result<Self, PathError> {
        Ok(LatticePath3D::from_steps(rle_decode(s, Dir3::from_letter)?))
    }
}

const TILE_SHIFT: u32 = 3;
const TILE_MASK: i32 = (1 << TILE_SHIFT) - 1;

/// Extents of the lines through a plane, stored in 8x8 tiles so that lines
/// near each other share memory. A walk touches lines near its position, so
/// this keeps the working set small where a flat hash map would scatter it.
#[derive(Debug, Clone, Default)]
struct LinePlane {
    tiles: FxHashMap<u64, u32>,
    slots: Vec<[Extent; 1 << (2 * TILE_SHIFT)]>,
    lines: usize,
}

impl LinePlane {
    #[inline]
    fn split(a: i32, b: i32) -> (u64, usize) {
        let key = (((a >> TILE_SHIFT) as u32 as u64) << 32) | (b >> TILE_SHIFT) as u32 as u64;
        (key, (((a & TILE_MASK) << TILE_SHIFT) | (b & TILE_MASK)) as usize)
    }

    #[inline]
    fn get(&self, a: i32, b: i32) -> Extent {
        let (key, cell) = Self::split(a, b);
        self.tiles.get(&key).map_or(Extent::EMPTY, |&t| self.slots[t as usize][cell])
    }

    #[inline]
    fn include(&mut self, a: i32, b: i32, v: i32) {
        let (key, cell) = Self::split(a, b);
        let slots = &mut self.slots;
        let t = *self.tiles.entry(key).or_insert_with(|| {
            slots.push([Extent::EMPTY; 1 << (2 * TILE_SHIFT)]);
            (slots.len() - 1) as u32
        });
        let e = &mut self.slots[t as usize][cell];
        self.lines += e.is_empty() as usize;
        e.include(v);
    }
}

/// Extent of visited sites along every axis-parallel line that holds one.
#[derive(Debug, Clone, Default)]
pub struct LineExtremaIndex3D {
    /// Lines parallel to e1, keyed by `(y, z)`, valued by the `x` extent.
    x_lines: LinePlane,
    y_lines: LinePlane,
    z_lines: LinePlane,
}

impl LineExtremaIndex3D {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: Site3) {
        self.x_lines.include(s.y, s.z, s.x);
        self.y_lines.include(s.x, s.z, s.y);
        self.z_lines.include(s.x, s.y, s.z);
    }

    /// Number of distinct lines recorded, summed over the three axes.
    pub fn line_count(&self) -> usize {
        self.x_lines.lines + self.y_lines.lines + self.z_lines.lines
    }

    #[inline]
    pub fn free_directions(&self, at: Site3) -> DirSet3 {
        let ex = self.x_lines.get(at.y, at.z);
        let ey = self.y_lines.get(at.x, at.z);
        let ez = self.z_lines.get(at.x, at.y);
        let mut bits = 0u8;
        bits |= (ex.max <= at.x) as u8;
        bits |= ((ex.min >= at.x) as u8) << 1;
        bits |= ((ey.max <= at.y) as u8) << 2;
        bits |= ((ey.min >= at.y) as u8) << 3;
        bits |= ((ez.max <= at.z) as u8) << 4;
        bits |= ((ez.min >= at.z) as u8) << 5;
        DirSet3(bits)
    }
}

/// Allowed directions by scanning every visited site.
pub fn naive_allowed_directions_3d(visited: &[Site3], at: Site3) -> DirSet3 {
    let mut blocked = 0u8;
    for s in visited {
        let line_x = s.y == at.y && s.z == at.z;
        let line_y = s.x == at.x && s.z == at.z;
        let line_z = s.x == at.x && s.y == at.y;
        blocked |= (line_x & (s.x > at.x)) as u8;
        blocked |= ((line_x & (s.x < at.x)) as u8) << 1;
        blocked |= ((line_y & (s.y > at.y)) as u8) << 2;
        blocked |= ((line_y & (s.y < at.y)) as u8) << 3;
        blocked |= ((line_z & (s.z > at.z)) as u8) << 4;
        blocked |= ((line_z & (s.z < at.z)) as u8) << 5;
    }
    DirSet3(!blocked & DirSet3::FULL.0)
}

/// A 3D walk in progress.
#[derive(Debug, Clone)]
pub struct Walk3State {
    pos: Site3,
    index: LineExtremaIndex3D,
    steps: u64,
    sites: Option<Vec<Site3>>,
    /// Times at which fewer than three directions were allowed.
    few_directions: u64,
}

impl Walk3State {
    pub fn new(record: bool) -> Self {
        let mut index = LineExtremaIndex3D::new();
        index.insert(Site3::ORIGIN);
        Walk3State { pos: Site3::ORIGIN, index, steps: 0, sites: record.then(|| vec![Site3::ORIGIN]), few_directions: 0 }
    }

    pub fn position(&self) -> Site3 {
        self.pos
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn index(&self) -> &LineExtremaIndex3D {
        &self.index
    }

    pub fn sites(&self) -> Option<&[Site3]> {
        self.sites.as_deref()
    }

    /// How often fewer than three directions were open (a soft check; the
    /// bound is not proved).
    pub fn few_direction_events(&self) -> u64 {
        self.few_directions
    }

    #[inline]
    pub fn allowed_directions(&self) -> DirSet3 {
        self.index.free_directions(self.pos)
    }

    #[inline]
    pub fn apply(&mut self, d: Dir3) {
        self.pos = self.pos.step(d);
        self.steps += 1;
        self.index.insert(self.pos);
        if let Some(s) = self.sites.as_mut() {
            s.push(self.pos);
        }
    }

    /// One uniform step over the allowed directions; `None` if the walker
    /// is trapped.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<Dir3> {
        let allowed = self.allowed_directions();
        let k = allowed.len();
        if k < 3 {
            self.few_directions += 1;
            if k == 0 {
                return None;
            }
        }
        let d = allowed.nth(rng.random_range(0..k)).expect("nonempty");
        self.apply(d);
        Some(d)
    }

    /// Runs up to `n` steps; returns how many were taken.
    pub fn run<R: Rng + ?Sized>(&mut self, n: u64, rng: &mut R) -> u64 {
        for i in 0..n {
            if self.step(rng).is_none() {
                return i;
            }
        }
        n
    }

    pub fn into_path(self) -> Option<LatticePath3D> {
        self.sites.map(|sites| LatticePath3D { sites })
    }
}

pub fn simulate_3d(n: u64, seed: u64) -> LatticePath3D {
    let mut rng = seeded(seed);
    let mut w = Walk3State::new(true);
    w.run(n, &mut rng);
    w.into_path().expect("recorded")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub t: u64,
    pub mean: f64,
    pub stderr: f64,
    pub nseeds: usize,
}

impl NormRow {
    pub const CSV_HEADER: &'static str = "t,mean,stderr,nseeds";

    pub fn to_csv(&self) -> String {
        format!("{},{},{},{}", self.t, self.mean, self.stderr, self.nseeds)
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 4 {
            return Err(format!("expected 4 fields, found {}", f.len()));
        }
        let bad = |name: &str| format!("bad {name}");
        Ok(NormRow {
            t: f[0].parse().map_err(|_| bad("t"))?,
            mean: f[1].parse().map_err(|_| bad("mean"))?,
            stderr: f[2].parse().map_err(|_| bad("stderr"))?,
            nseeds: f[3].parse().map_err(|_| bad("nseeds"))?,
        })
    }
}

/// Endpoint L2 norms of one walk at each checkpoint.
pub fn norms_at(seed: u64, checkpoints: &[u64]) -> Vec<f64> {
    assert!(checkpoints.windows(2).all(|w| w[0] < w[1]), "checkpoints must increase");
    let mut rng = seeded(seed);
    let mut w = Walk3State::new(false);
    checkpoints
        .iter()
        .map(|&t| {
            w.run(t - w.steps(), &mut rng);
            w.position().l2_norm()
        })
        .collect()
}

/// Mean endpoint norm and its standard error across `seeds` at each checkpoint.
pub fn endpoint_norm_series(seeds: &[u64], checkpoints: &[u64]) -> Vec<NormRow> {
    let per_seed: Vec<Vec<f64>> = seeds.par_iter().map(|&s| norms_at(s, checkpoints)).collect();
    summarize_norms(&per_seed, checkpoints)
}

pub fn summarize_norms(per_seed: &[Vec<f64>], checkpoints: &[u64]) -> Vec<NormRow> {
    let n = per_seed.len();
    checkpoints
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let xs: Vec<f64> = per_seed.iter().map(|v| v[i]).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let stderr = if n > 1 {
                (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0) / n as f64).sqrt()
            } else {
                0.0
            };
            NormRow { t, mean, stderr, nseeds: n }
        })
        .collect()
}

/// Geometric checkpoint grid with `per_decade` points per decade.
pub fn geometric_grid(from: u64, to: u64, per_decade: u32) -> Vec<u64> {
    let (a, b) = ((from as f64).log10(), (to as f64).log10());
    let count = ((b - a) * per_decade as f64).round() as u32;
    let mut grid: Vec<u64> = (0..=count).map(|i| 10f64.powf(a + (b - a) * i as f64 / count.max(1) as f64).round() as u64).collect();
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_across_tile_borders() {
        let mut idx = LineExtremaIndex3D::new();
        let sites = [Site3 { x: 0, y: -1, z: 7 }, Site3 { x: 3, y: -1, z: 7 }, Site3 { x: 0, y: -9, z: 8 }, Site3 { x: -20, y: 0, z: 0 }];
        for s in sites {
            idx.insert(s);
        }
        let mut distinct = std::collections::HashSet::new();
        for s in sites {
            distinct.insert((0, s.y, s.z));
            distinct.insert((1, s.x, s.z));
            distinct.insert((2, s.x, s.y));
        }
        assert_eq!(idx.line_count(), distinct.len());
        for probe in [Site3 { x: 1, y: -1, z: 7 }, Site3 { x: 0, y: -5, z: 8 }, Site3 { x: 0, y: 0, z: 0 }, Site3 { x: -8, y: -1, z: 7 }] {
            assert_eq!(idx.free_directions(probe), naive_allowed_directions_3d(&sites, probe), "{probe:?}");
        }
    }

    #[test]
    fn small_examples() {
        let w = Walk3State::new(false);
        assert_eq!(w.allowed_directions(), DirSet3::FULL);
        let mut w = Walk3State::new(true);
        w.apply(Dir3::XPlus);
        let allowed = w.allowed_directions();
        assert_eq!(allowed.len(), 5);
        assert!(!allowed.contains(Dir3::XMinus));
        assert_eq!(naive_allowed_directions_3d(w.sites().unwrap(), w.position()), allowed);
    }

    #[test]
    fn equal_seeds_equal_paths() {
        assert_eq!(simulate_3d(2000, 9), simulate_3d(2000, 9));
    }

    #[test]
    fn one_step_norm() {
        let rows = endpoint_norm_series(&[1, 2, 3], &[1]);
        assert_eq!(rows[0].mean, 1.0);
        assert_eq!(rows[0].stderr, 0.0);
    }

    #[test]
    fn rle_round_trip() {
        let p = simulate_3d(500, 4);
        assert_eq!(LatticePath3D::from_rle(&p.to_rle()).unwrap(), p);
        assert!(p.to_rle().chars().all(|c| "XxYyZz0123456789".contains(c)));
    }

    #[test]
    fn grid() {
        assert_eq!(geometric_grid(10, 1000, 1), vec![10, 100, 1000]);
        assert_eq!(geometric_grid(1, 1, 4), vec![1]);
    }
}
