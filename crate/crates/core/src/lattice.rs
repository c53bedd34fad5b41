//! Sites, unit directions and trajectories on Z².

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: i32,
    pub y: i32,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Site { x, y }
    }

    #[inline]
    pub fn step(self, dir: Dir) -> Site {
        let (dx, dy) = dir.delta();
        Site::new(self.x + dx, self.y + dy)
    }

    pub fn l1_norm(self) -> u64 {
        self.x.unsigned_abs() as u64 + self.y.unsigned_abs() as u64
    }
}

/// The two lattice axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Unit directions, `Right = +e1`, `Up = +e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Right,
    Left,
    Up,
    Down,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Right, Dir::Left, Dir::Up, Dir::Down];

    #[inline]
    pub const fn delta(self) -> (i32, i32) {
        match self {
            Dir::Right => (1, 0),
            Dir::Left => (-1, 0),
            Dir::Up => (0, 1),
            Dir::Down => (0, -1),
        }
    }

    pub const fn opposite(self) -> Dir {
        match self {
            Dir::Right => Dir::Left,
            Dir::Left => Dir::Right,
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }

    pub const fn axis(self) -> Axis {
        match self {
            Dir::Right | Dir::Left => Axis::Horizontal,
            Dir::Up | Dir::Down => Axis::Vertical,
        }
    }

    /// Reflection through the main diagonal (swaps the two axes).
    pub const fn transpose(self) -> Dir {
        match self {
            Dir::Right => Dir::Up,
            Dir::Up => Dir::Right,
            Dir::Left => Dir::Down,
            Dir::Down => Dir::Left,
        }
    }

    /// Letter used by the run-length trajectory encoding.
    pub const fn letter(self) -> char {
        match self {
            Dir::Right => 'R',
            Dir::Left => 'L',
            Dir::Up => 'U',
            Dir::Down => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        match c {
            'R' => Some(Dir::Right),
            'L' => Some(Dir::Left),
            'U' => Some(Dir::Up),
            'D' => Some(Dir::Down),
            _ => None,
        }
    }

    /// The direction leading from `a` to the neighbouring site `b`.
    pub fn between(a: Site, b: Site) -> Option<Dir> {
        match (b.x - a.x, b.y - a.y) {
            (1, 0) => Some(Dir::Right),
            (-1, 0) => Some(Dir::Left),
            (0, 1) => Some(Dir::Up),
            (0, -1) => Some(Dir::Down),
            _ => None,
        }
    }

    const fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dir::Right => "+e1",
            Dir::Left => "-e1",
            Dir::Up => "+e2",
            Dir::Down => "-e2",
        };
        f.write_str(name)
    }
}

/// A set of unit directions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DirSet(u8);

impl DirSet {
    pub const EMPTY: DirSet = DirSet(0);
    pub const FULL: DirSet = DirSet(0b1111);

    pub fn of(dirs: &[Dir]) -> DirSet {
        dirs.iter().fold(DirSet::EMPTY, |s, &d| s.with(d))
    }

    #[inline]
    pub const fn with(self, dir: Dir) -> DirSet {
        DirSet(self.0 | dir.bit())
    }

    #[inline]
    pub const fn contains(self, dir: Dir) -> bool {
        self.0 & dir.bit() != 0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn from_bits(bits: u8) -> DirSet {
        DirSet(bits & 0b1111)
    }

    /// The `i`-th member in the order of [`Dir::ALL`].
    #[inline]
    pub fn nth(self, i: usize) -> Option<Dir> {
        let mut bits = self.0;
        for _ in 0..i {
            bits &= bits.wrapping_sub(1);
        }
        (bits != 0).then(|| Dir::ALL[bits.trailing_zeros() as usize])
    }

    pub fn iter(self) -> impl Iterator<Item = Dir> {
        Dir::ALL.into_iter().filter(move |d| self.contains(*d))
    }
}

impl fmt::Debug for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|d| d.to_string())).finish()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("path must start at the origin")]
    NotAtOrigin,
    #[error("sites {index} and {} are not nearest neighbours", index + 1)]
    NotUnitStep { index: usize },
    #[error("path is empty")]
    Empty,
    #[error("bad run-length string at byte {position}: {reason}")]
    BadEncoding { position: usize, reason: &'static str },
}

/// A time-ordered nearest-neighbour trajectory starting at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePath {
    sites: Vec<Site>,
}

impl LatticePath {
    pub fn new(sites: Vec<Site>) -> Result<Self, PathError> {
        match sites.first() {
            None => return Err(PathError::Empty),
            Some(&s) if s != Site::ORIGIN => return Err(PathError::NotAtOrigin),
            _ => {}
        }
        if let Some(index) = sites.windows(2).position(|w| Dir::between(w[0], w[1]).is_none()) {
            return Err(PathError::NotUnitStep { index });
        }
        Ok(LatticePath { sites })
    }

    /// Builds the path of the origin followed by `steps`.
    pub fn from_steps<I: IntoIterator<Item = Dir>>(steps: I) -> Self {
        let mut sites = vec![Site::ORIGIN];
        let mut here = Site::ORIGIN;
        for d in steps {
            here = here.step(d);
            sites.push(here);
        }
        LatticePath { sites }
    }

    pub(crate) fn from_sites_unchecked(sites: Vec<Site>) -> Self {
        debug_assert!(LatticePath::new(sites.clone()).is_ok());
        LatticePath { sites }
    }

    pub fn origin() -> Self {
        LatticePath { sites: vec![Site::ORIGIN] }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.sites.len() == 1
    }

    pub fn endpoint(&self) -> Site {
        *self.sites.last().expect("paths are nonempty")
    }

    pub fn steps(&self) -> impl Iterator<Item = Dir> + '_ {
        self.sites
            .windows(2)
            .map(|w| Dir::between(w[0], w[1]).expect("validated"))
    }

    /// The prefix made of the first `n` steps.
    pub fn prefix(&self, n: usize) -> LatticePath {
        LatticePath { sites: self.sites[..=n.min(self.len())].to_vec() }
    }

    pub fn to_rle(&self) -> String {
        rle_encode(self.steps().map(Dir::letter))
    }

    pub fn from_rle(s: &str) -> Result<Self, PathError> {
        let steps = rle_decode(s, Dir::from_letter)?;
        Ok(LatticePath::from_steps(steps))
    }
}

/// Run-length encodes a letter stream: each run is the letter followed by its
/// length, the length being omitted for runs of one (`RRRU` → `R3U`).
pub fn rle_encode<I: IntoIterator<Item = char>>(letters: I) -> String {
    let mut out = String::new();
    let mut iter = letters.into_iter().peekable();
    while let Some(c) = iter.next() {
        let mut run = 1u64;
        while iter.peek() == Some(&c) {
            iter.next();
            run += 1;
        }
        out.push(c);
        if run > 1 {
            out.push_str(&run.to_string());
        }
    }
    out
}

/// Inverse of [`rle_encode`], mapping letters through `parse`.
pub fn rle_decode<T: Copy, F: Fn(char) -> Option<T>>(s: &str, parse: F) -> Result<Vec<T>, PathError> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let item = parse(c).ok_or(PathError::BadEncoding { position: i, reason: "unknown direction letter" })?;
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let run = if start == i {
            1
        } else {
            let run: u64 = s[start..i]
                .parse()
                .map_err(|_| PathError::BadEncoding { position: start, reason: "run length overflow" })?;
            if run < 2 {
                return Err(PathError::BadEncoding { position: start, reason: "explicit run length below 2" });
            }
            run
        };
        out.extend(std::iter::repeat_n(item, run as usize));
    }
    Ok(out)
}
