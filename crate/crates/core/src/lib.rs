//! Simulation of the kinetic prudent walk and its reductions.
//!
//! * [`walk2d`]: the prudent walk on Z² and the corner model, with an
//!   occupancy index, excursion decomposition and the truncation coupling.
//! * [`effective`]: the effective random walk, exit times, ladders and `Ŝ`.
//! * [`walk3d`]: the axis-prudent walk on Z³.
//! * [`limit`]: the Brownian limit process and occupation times.
//! * [`stats`]: the tests the verification suite is built from.
//! * [`acceptance`]: that suite.
//! * [`formats`]: JSON Lines and CSV file formats.

pub mod acceptance;
pub mod codec;
pub mod effective;
pub mod formats;
pub mod lattice;
pub mod limit;
pub mod rng;
pub mod stats;
pub mod walk2d;
pub mod walk3d;
