//! The kinetic prudent walk on Z² and the corner model.

mod coupling;
mod excursion;
mod index;
mod naive;
mod quadrant;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use coupling::{CoupledExcursion, Coupler, CouplingError, CouplingState};
pub use excursion::{
    excursion_decompose_as,
    corner_path_to_hat, detect_crossing, excursion_decompose, excursion_segment, excursion_to_effective, ExcursionError,
    ExcursionKind, ExcursionRecord, ExcursionTracker,
};
pub use index::{obstacle_free, Extent, Occupancy, OccupancyIndex};
pub use naive::{naive_allowed_directions, ray_meets_quadrant, NaiveOccupancy};
pub use quadrant::{settled_quadrant, Quadrant, QuadrantTracker};

use crate::lattice::{Dir, DirSet, LatticePath, Site};
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The prudent walk.
    Prudent,
    /// The prudent walk that also treats `{x ≤ 0, y ≤ 0}` as visited.
    Corner,
}

impl Variant {
    pub fn has_obstacle(self) -> bool {
        self == Variant::Corner
    }
}

/// How the first step is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstStep {
    Forced(Dir),
    /// Uniform over the allowed directions, like every later step.
    Natural,
}

/// The smallest axis-parallel rectangle holding every visited site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingRect {
    pub x_min: i32,
    pub x_max: i32,
    pub y_min: i32,
    pub y_max: i32,
}

impl BoundingRect {
    pub fn origin() -> Self {
        BoundingRect { x_min: 0, x_max: 0, y_min: 0, y_max: 0 }
    }

    /// Number of columns, `W`.
    pub fn width(&self) -> u64 {
        (self.x_max - self.x_min) as u64 + 1
    }

    /// Number of rows, `H`.
    pub fn height(&self) -> u64 {
        (self.y_max - self.y_min) as u64 + 1
    }

    #[inline]
    pub fn include(&mut self, s: Site) {
        self.x_min = self.x_min.min(s.x);
        self.x_max = self.x_max.max(s.x);
        self.y_min = self.y_min.min(s.y);
        self.y_max = self.y_max.max(s.y);
    }

    pub fn contains(&self, s: Site) -> bool {
        (self.x_min..=self.x_max).contains(&s.x) && (self.y_min..=self.y_max).contains(&s.y)
    }

    pub fn on_boundary(&self, s: Site) -> bool {
        self.contains(s) && (s.x == self.x_min || s.x == self.x_max || s.y == self.y_min || s.y == self.y_max)
    }
}

/// A walk in progress. The occupancy structure is a type parameter so the
/// same stepper runs on the extrema index or on the scanning oracle.
#[derive(Debug, Clone)]
pub struct WalkState<O: Occupancy = OccupancyIndex> {
    pos: Site,
    rect: BoundingRect,
    occupancy: O,
    variant: Variant,
    steps: u64,
    sites: Option<Vec<Site>>,
    quadrant: QuadrantTracker,
}

impl WalkState<OccupancyIndex> {
    /// A walk at the origin; `record` keeps every visited site.
    pub fn new(variant: Variant, record: bool) -> Self {
        Self::with_occupancy(variant, record, OccupancyIndex::new())
    }
}

impl<O: Occupancy> WalkState<O> {
    pub fn with_occupancy(variant: Variant, record: bool, mut occupancy: O) -> Self {
        occupancy.insert(Site::ORIGIN);
        WalkState {
            pos: Site::ORIGIN,
            rect: BoundingRect::origin(),
            occupancy,
            variant,
            steps: 0,
            sites: record.then(|| vec![Site::ORIGIN]),
            quadrant: QuadrantTracker::default(),
        }
    }

    pub fn position(&self) -> Site {
        self.pos
    }

    pub fn rect(&self) -> &BoundingRect {
        &self.rect
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn occupancy(&self) -> &O {
        &self.occupancy
    }

    pub fn quadrant(&self) -> Quadrant {
        self.quadrant.quadrant()
    }

    pub fn quadrant_tracker(&self) -> &QuadrantTracker {
        &self.quadrant
    }

    /// Recorded trajectory, if recording was requested.
    pub fn path(&self) -> Option<LatticePath> {
        self.sites.as_ref().map(|s| LatticePath::from_sites_unchecked(s.clone()))
    }

    pub fn into_path(self) -> Option<LatticePath> {
        self.sites.map(LatticePath::from_sites_unchecked)
    }

    /// Directions whose open half-line holds no visited site (and no
    /// obstacle site for the corner model).
    #[inline]
    pub fn allowed_directions(&self) -> DirSet {
        let free = self.occupancy.free_directions(self.pos);
        if self.variant.has_obstacle() {
            DirSet::from_bits(free.bits() & obstacle_free(self.pos).bits())
        } else {
            free
        }
    }

    /// Moves one step in `dir` without checking the step rule.
    #[inline]
    pub fn apply(&mut self, dir: Dir) {
        self.pos = self.pos.step(dir);
        self.steps += 1;
        self.rect.include(self.pos);
        self.occupancy.insert(self.pos);
        self.quadrant.observe(self.steps, dir, self.pos, &self.rect);
        if let Some(sites) = self.sites.as_mut() {
            sites.push(self.pos);
        }
        debug_assert!(self.rect.on_boundary(self.pos));
    }

    /// One step uniformly over the allowed directions; returns the direction.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Dir {
        let allowed = self.allowed_directions();
        let k = allowed.len();
        debug_assert!(k > 0, "no allowed direction at {:?}", self.pos);
        let dir = if k == 1 { allowed.nth(0) } else { allowed.nth(rng.random_range(0..k)) }.expect("nonempty");
        self.apply(dir);
        dir
    }

    /// First step per `first`, then `n - 1` ordinary steps.
    pub fn run<R: Rng + ?Sized>(&mut self, n: u64, first: FirstStep, rng: &mut R) {
        if n == 0 {
            return;
        }
        match first {
            FirstStep::Forced(d) if self.steps == 0 => self.apply(d),
            _ => {
                self.step(rng);
            }
        }
        for _ in 1..n {
            self.step(rng);
        }
    }
}

/// An `n`-step trajectory of `variant` driven by the stream `seeded(seed)`.
pub fn simulate(n: u64, seed: u64, variant: Variant, first_step: FirstStep) -> LatticePath {
    let mut rng = seeded(seed);
    simulate_with(n, &mut rng, variant, first_step)
}

pub fn simulate_with<R: Rng + ?Sized>(n: u64, rng: &mut R, variant: Variant, first_step: FirstStep) -> LatticePath {
    let mut state = WalkState::new(variant, true);
    state.run(n, first_step, rng);
    state.into_path().expect("recorded")
}

/// Reflection through the main diagonal, used to bring a walk whose first
/// step is vertical into the horizontal-first convention.
pub fn transpose_path(path: &LatticePath) -> LatticePath {
    LatticePath::from_steps(path.steps().map(Dir::transpose))
}
