//! Throughput of the indexed steppers against full-scan steppers.
//!
//! A full-scan step at size `n` costs `O(n)`, so running one from scratch to
//! `n = 10^6` is out of reach. Its throughput at size `n` is measured by
//! replaying an indexed walk of `n` steps into a full-scan state and timing a
//! short continuation from there.

use std::fs;
use std::time::Instant;

use rand::Rng;

use prudent_walk::rng::seeded;
use prudent_walk::stats::loglog_slope;
use prudent_walk::walk2d::{FirstStep, NaiveOccupancy, Variant, WalkState};
use prudent_walk::walk3d::{geometric_grid, naive_allowed_directions_3d, Walk3State};

use crate::config::RunConfig;
use crate::Failure;

/// Indexed work per measurement, repeated over fresh walks for small `n`.
const TARGET_STEPS: u64 = 2_000_000;
/// Rough number of site comparisons spent per full-scan measurement.
const SCAN_BUDGET: u64 = 100_000_000;
pub const RATIO_FLOOR: f64 = 50.0;
pub const SLOPE_TOLERANCE: f64 = 0.15;

#[derive(Debug, Clone, Copy)]
struct Row {
    dim: u8,
    n: u64,
    indexed: f64,
    naive: f64,
}

fn indexed_2d(n: u64, seed: u64) -> f64 {
    let reps = (TARGET_STEPS / n).max(1);
    let start = Instant::now();
    for r in 0..reps {
        let mut w = WalkState::new(Variant::Prudent, false);
        w.run(n, FirstStep::Natural, &mut seeded(seed + r));
        std::hint::black_box(w.position());
    }
    (reps * n) as f64 / start.elapsed().as_secs_f64()
}

fn naive_2d(n: u64, seed: u64) -> f64 {
    let mut rng = seeded(seed);
    let mut w = WalkState::new(Variant::Prudent, true);
    w.run(n, FirstStep::Natural, &mut rng);
    let path = w.into_path().expect("recorded");
    let mut scan = WalkState::with_occupancy(Variant::Prudent, false, NaiveOccupancy::default());
    for d in path.steps() {
        scan.apply(d);
    }
    let k = (SCAN_BUDGET / n).clamp(20, 20_000);
    let start = Instant::now();
    for _ in 0..k {
        scan.step(&mut rng);
    }
    k as f64 / start.elapsed().as_secs_f64()
}

fn indexed_3d(n: u64, seed: u64) -> f64 {
    let reps = (TARGET_STEPS / n).max(1);
    let start = Instant::now();
    let mut done = 0;
    for r in 0..reps {
        let mut w = Walk3State::new(false);
        done += w.run(n, &mut seeded(seed + r));
    }
    done as f64 / start.elapsed().as_secs_f64()
}

fn naive_3d(n: u64, seed: u64) -> f64 {
    let mut rng = seeded(seed);
    let mut w = Walk3State::new(true);
    w.run(n, &mut rng);
    let mut sites = w.sites().expect("recorded").to_vec();
    let k = (SCAN_BUDGET / n).clamp(20, 20_000);
    let start = Instant::now();
    for _ in 0..k {
        let at = *sites.last().expect("origin");
        let allowed = naive_allowed_directions_3d(&sites, at);
        if allowed.len() == 0 {
            break;
        }
        let d = allowed.nth(rng.random_range(0..allowed.len())).expect("in range");
        sites.push(at.step(d));
    }
    k as f64 / start.elapsed().as_secs_f64()
}

pub fn run(cfg: &RunConfig, max_n: u64) -> Result<(), Failure> {
    if max_n < 10_000 {
        return Err(Failure::Usage("--max-n must be at least 10000".into()));
    }
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Usage(format!("{}: {e}", cfg.out.display())))?;
    let sizes = geometric_grid(10_000, max_n, 2);
    let mut rows = Vec::new();
    println!("{:>3} {:>9} {:>14} {:>14} {:>10}", "dim", "n", "indexed/s", "naive/s", "ratio");
    for dim in [2u8, 3] {
        for &n in &sizes {
            let (indexed, naive) = match dim {
                2 => (indexed_2d(n, cfg.seed), naive_2d(n, cfg.seed)),
                _ => (indexed_3d(n, cfg.seed), naive_3d(n, cfg.seed)),
            };
            let row = Row { dim, n, indexed, naive };
            println!("{:>3} {:>9} {:>14.4e} {:>14.4e} {:>10.1}", dim, n, indexed, naive, indexed / naive);
            rows.push(row);
        }
    }
    let mut csv = String::from("dim,n,indexed_steps_per_s,naive_steps_per_s,ratio\n");
    for r in &rows {
        csv.push_str(&format!("{},{},{},{},{}\n", r.dim, r.n, r.indexed, r.naive, r.indexed / r.naive));
    }
    fs::write(cfg.out.join("bench.csv"), csv)?;

    let mut failures = Vec::new();
    let top = rows.iter().filter(|r| r.dim == 2).last().expect("sizes nonempty");
    let ratio = top.indexed / top.naive;
    let ok = ratio >= RATIO_FLOOR;
    println!("2D ratio at n={}: {ratio:.1} (>= {RATIO_FLOOR}) {}", top.n, if ok { "PASS" } else { "FAIL" });
    if !ok {
        failures.push("ratio");
    }
    for dim in [2u8, 3] {
        let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.dim == dim).map(|r| (r.n as f64, r.indexed)).collect();
        match loglog_slope(&pts) {
            Ok(fit) => {
                let ok = fit.slope.abs() <= SLOPE_TOLERANCE;
                println!("{dim}D indexed log-throughput slope: {:.3} (|.| <= {SLOPE_TOLERANCE}) {}", fit.slope, if ok { "PASS" } else { "FAIL" });
                if !ok {
                    failures.push("slope");
                }
            }
            Err(e) => println!("{dim}D indexed log-throughput slope: not fitted ({e})"),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("benchmark checks failed: {}", failures.join(", "))))
    }
}
