use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use prudent_walk::effective::{hat_path, simulate_effective_walk};
use prudent_walk::formats::{write_csv, write_jsonl, AngleRow, TrajectoryRecord, ValuesRecord, ZRow};
use prudent_walk::lattice::{Axis, Dir};
use prudent_walk::limit::{angle_cdf_clamped, sample_brownian, z_process, SPEED};
use prudent_walk::rng::{mix, seeded};
use prudent_walk::stats::{ks_statistic, speed_estimate, Estimate};
use prudent_walk::walk2d::{excursion_decompose_as, transpose_path, FirstStep, Variant, WalkState};
use prudent_walk::walk3d::{geometric_grid, summarize_norms, NormRow, Walk3State};

use crate::config::{FirstStepArg, Model, RunConfig};
use crate::Failure;

/// Replicas simulated in parallel before their output is written.
const CHUNK: u64 = 32;

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.replicas == 0 {
        return Err(Failure::Usage("need at least one replica".into()));
    }
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Usage(format!("{}: {e}", cfg.out.display())))?;
    // echo the merged configuration; it is valid --config input
    print!("{}", cfg.to_file_string());
    let start = Instant::now();
    let work = match cfg.variant {
        Model::Prudent2d => run_2d(cfg, Variant::Prudent)?,
        Model::Corner => run_2d(cfg, Variant::Corner)?,
        Model::Walk3d => run_3d(cfg)?,
        Model::Effective => run_effective(cfg)?,
        Model::Zprocess => run_z(cfg)?,
    };
    let secs = start.elapsed().as_secs_f64();
    println!("{} replicas of {} in {:.2}s ({:.3e} steps/s)", cfg.replicas, cfg.variant, secs, work as f64 / secs.max(1e-9));
    println!("output in {}", cfg.out.display());
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<fs::File, Failure> {
    let path = dir.join(name);
    fs::File::create(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_all(file: &mut fs::File, text: &str) -> Result<(), Failure> {
    file.write_all(text.as_bytes()).map_err(Failure::from)
}

fn write_summary<T: Serialize>(dir: &Path, summary: &T) -> Result<(), Failure> {
    let mut f = create(dir, "summary.json")?;
    let text = serde_json::to_string_pretty(summary).expect("plain data serializes");
    write_all(&mut f, &text)?;
    write_all(&mut f, "\n")?;
    println!("{text}");
    Ok(())
}

/// Runs `f` on every replica seed, `CHUNK` at a time in parallel, handing the
/// results to `sink` in replica order.
fn fan_out<T, F, S>(cfg: &RunConfig, f: F, mut sink: S) -> Result<(), Failure>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
    S: FnMut(T) -> Result<(), Failure>,
{
    let mut r = 0;
    while r < cfg.replicas {
        let end = (r + CHUNK).min(cfg.replicas);
        let results: Vec<T> = (r..end).into_par_iter().map(|i| f(i, mix(cfg.seed, i))).collect();
        for res in results {
            sink(res)?;
        }
        r = end;
    }
    Ok(())
}

#[derive(Serialize)]
struct Replica2d {
    replica: u64,
    seed: u64,
    steps: u64,
    endpoint: [i64; 2],
    l1_norm: u64,
    quadrant: u8,
    vertical_excursions: usize,
    horizontal_excursions: usize,
    crossings: usize,
}

#[derive(Serialize)]
struct Summary2d {
    variant: String,
    n: u64,
    replicas: u64,
    master_seed: u64,
    speed: Option<Estimate>,
    quadrant_counts: [u64; 4],
    vertical_excursions: usize,
    horizontal_excursions: usize,
    crossings: usize,
    per_replica: Vec<Replica2d>,
}

fn run_2d(cfg: &RunConfig, variant: Variant) -> Result<u64, Failure> {
    let first = match cfg.first_step {
        FirstStepArg::Natural => FirstStep::Natural,
        FirstStepArg::Right => FirstStep::Forced(Dir::Right),
    };
    let mut traj = create(&cfg.out, "trajectories.jsonl")?;
    let mut exc = create(&cfg.out, "excursions.csv")?;
    write_all(&mut exc, &format!("replica,{}\n", prudent_walk::walk2d::ExcursionRecord::CSV_HEADER))?;
    let mut angles = Vec::new();
    let mut rows = Vec::new();
    fan_out(
        cfg,
        |i, seed| {
            let mut w = WalkState::new(variant, true);
            w.run(cfg.n, first, &mut seeded(seed));
            let quadrant = w.quadrant();
            let path = w.into_path().expect("recorded");
            // the decomposition wants a horizontal first step
            let vertical_first = path.steps().next().is_some_and(|d| d.axis() == Axis::Vertical);
            let oriented = if vertical_first { transpose_path(&path) } else { path.clone() };
            let records = excursion_decompose_as(&oriented, variant).expect("horizontal first step");
            let end = path.endpoint();
            let (s1, s2) = quadrant.signs();
            let angle = (s2 as f64 * end.y as f64).atan2(s1 as f64 * end.x as f64).clamp(0.0, std::f64::consts::FRAC_PI_2);
            let row = Replica2d {
                replica: i,
                seed,
                steps: path.len() as u64,
                endpoint: [end.x as i64, end.y as i64],
                l1_norm: end.l1_norm(),
                quadrant: quadrant.label(),
                vertical_excursions: records.iter().filter(|r| r.kind == prudent_walk::walk2d::ExcursionKind::Vertical).count(),
                horizontal_excursions: records.iter().filter(|r| r.kind == prudent_walk::walk2d::ExcursionKind::Horizontal).count(),
                crossings: records.iter().filter(|r| r.crossed).count(),
            };
            let line = write_jsonl(&[TrajectoryRecord::from_path(seed, variant, &path)]);
            let csv: String = records.iter().map(|r| format!("{i},{}\n", r.to_csv())).collect();
            (row, line, csv, AngleRow { replica: i, angle })
        },
        |(row, line, csv, angle)| {
            write_all(&mut traj, &line)?;
            write_all(&mut exc, &csv)?;
            angles.push(angle);
            rows.push(row);
            Ok(())
        },
    )?;
    write_all(&mut create(&cfg.out, "angles.csv")?, &write_csv(&angles))?;
    let mut quadrant_counts = [0u64; 4];
    for r in &rows {
        quadrant_counts[r.quadrant as usize - 1] += 1;
    }
    let norms: Vec<u64> = rows.iter().map(|r| r.l1_norm).collect();
    let summary = Summary2d {
        variant: cfg.variant.to_string(),
        n: cfg.n,
        replicas: cfg.replicas,
        master_seed: cfg.seed,
        speed: if cfg.n > 0 { speed_estimate(&norms, cfg.n).ok() } else { None },
        quadrant_counts,
        vertical_excursions: rows.iter().map(|r| r.vertical_excursions).sum(),
        horizontal_excursions: rows.iter().map(|r| r.horizontal_excursions).sum(),
        crossings: rows.iter().map(|r| r.crossings).sum(),
        per_replica: rows,
    };
    write_summary(&cfg.out, &summary)?;
    Ok(cfg.n * cfg.replicas)
}

#[derive(Serialize)]
struct Summary3d {
    variant: String,
    n: u64,
    replicas: u64,
    master_seed: u64,
    steps_taken: Vec<u64>,
    few_direction_events: u64,
    final_norm: Option<NormRow>,
}

fn run_3d(cfg: &RunConfig) -> Result<u64, Failure> {
    let checkpoints = checkpoint_grid(cfg)?;
    let mut traj = create(&cfg.out, "trajectories.jsonl")?;
    let mut per_seed = Vec::new();
    let mut steps_taken = Vec::new();
    let mut few = 0;
    fan_out(
        cfg,
        |_, seed| {
            let mut rng = seeded(seed);
            let mut w = Walk3State::new(true);
            let norms: Vec<f64> = checkpoints
                .iter()
                .map(|&t| {
                    w.run(t - w.steps(), &mut rng);
                    w.position().l2_norm()
                })
                .collect();
            w.run(cfg.n - w.steps(), &mut rng);
            let (steps, few) = (w.steps(), w.few_direction_events());
            let path = w.into_path().expect("recorded");
            (write_jsonl(&[TrajectoryRecord::from_path_3d(seed, &path)]), norms, steps, few)
        },
        |(line, norms, steps, f)| {
            write_all(&mut traj, &line)?;
            per_seed.push(norms);
            steps_taken.push(steps);
            few += f;
            Ok(())
        },
    )?;
    let rows = summarize_norms(&per_seed, &checkpoints);
    write_all(&mut create(&cfg.out, "norms.csv")?, &write_csv(&rows))?;
    let summary = Summary3d {
        variant: cfg.variant.to_string(),
        n: cfg.n,
        replicas: cfg.replicas,
        master_seed: cfg.seed,
        few_direction_events: few,
        final_norm: rows.last().copied(),
        steps_taken,
    };
    write_summary(&cfg.out, &summary)?;
    Ok(cfg.n * cfg.replicas)
}

/// Checkpoints for norm series: the configured ones, or a geometric grid up
/// to `n`. Always within `1..=n` and increasing.
fn checkpoint_grid(cfg: &RunConfig) -> Result<Vec<u64>, Failure> {
    let grid = if cfg.checkpoints.is_empty() {
        if cfg.n == 0 {
            Vec::new()
        } else {
            let mut g = geometric_grid(1, cfg.n, 4);
            if g.last() != Some(&cfg.n) {
                g.push(cfg.n);
            }
            g
        }
    } else {
        cfg.checkpoints.clone()
    };
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid.iter().any(|&t| t == 0 || t > cfg.n) {
        return Err(Failure::Usage(format!("checkpoints must increase within 1..={}", cfg.n)));
    }
    Ok(grid)
}

#[derive(Serialize)]
struct ReplicaEffective {
    replica: u64,
    seed: u64,
    ladder_times: usize,
    time_ratio: f64,
}

#[derive(Serialize)]
struct SummaryEffective {
    variant: String,
    n: u64,
    replicas: u64,
    master_seed: u64,
    time_ratio: Option<Estimate>,
    time_ratio_target: f64,
    per_replica: Vec<ReplicaEffective>,
}

fn run_effective(cfg: &RunConfig) -> Result<u64, Failure> {
    let mut eff = create(&cfg.out, "effective.jsonl")?;
    let mut hat_file = create(&cfg.out, "hat.jsonl")?;
    let n = cfg.n as usize;
    let mut rows = Vec::new();
    fan_out(
        cfg,
        |i, seed| {
            let path = simulate_effective_walk(n, &mut seeded(seed));
            let hat = hat_path(&path);
            let row = ReplicaEffective {
                replica: i,
                seed,
                ladder_times: hat.ladder().ladder_times.len(),
                time_ratio: if n > 0 { hat.clock()[n] as f64 / n as f64 } else { 0.0 },
            };
            let a = write_jsonl(&[ValuesRecord::from_effective(seed, &path)]);
            let b = write_jsonl(&[ValuesRecord::from_hat(seed, &hat)]);
            (row, a, b)
        },
        |(row, a, b)| {
            write_all(&mut eff, &a)?;
            write_all(&mut hat_file, &b)?;
            rows.push(row);
            Ok(())
        },
    )?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.time_ratio).collect();
    let summary = SummaryEffective {
        variant: cfg.variant.to_string(),
        n: cfg.n,
        replicas: cfg.replicas,
        master_seed: cfg.seed,
        time_ratio: if n > 0 { Estimate::from_samples(&ratios).ok() } else { None },
        time_ratio_target: 7.0 / 3.0,
        per_replica: rows,
    };
    write_summary(&cfg.out, &summary)?;
    Ok(cfg.n * cfg.replicas)
}

#[derive(Serialize)]
struct SummaryZ {
    variant: String,
    dt: f64,
    replicas: u64,
    master_seed: u64,
    /// KS distance of the `u = 1` angles from the limit law, when there are
    /// enough replicas.
    angle_ks: Option<f64>,
}

fn run_z(cfg: &RunConfig) -> Result<u64, Failure> {
    if cfg.n == 0 {
        return Err(Failure::Usage("zprocess needs n >= 1 quadrature steps per unit time".into()));
    }
    let dt = 1.0 / cfg.n as f64;
    let grid: Vec<f64> = if cfg.checkpoints.is_empty() {
        (0..=100).map(|i| i as f64 / 100.0).collect()
    } else {
        let top = *cfg.checkpoints.last().expect("nonempty") as f64;
        cfg.checkpoints.iter().map(|&c| c as f64 / top).collect()
    };
    let mut z_rows = Vec::new();
    let mut angles = Vec::new();
    fan_out(
        cfg,
        |i, seed| {
            let mut rng = seeded(seed);
            let s1 = if rng.random::<bool>() { 1 } else { -1 };
            let s2 = if rng.random::<bool>() { 1 } else { -1 };
            let path = sample_brownian(dt, SPEED, &mut rng).map_err(|e| e.to_string())?;
            let z = z_process(&path, s1, s2, &grid).map_err(|e| e.to_string())?;
            let rows: Vec<ZRow> =
                grid.iter().zip(&z.points).map(|(&u, &(z1, z2))| ZRow { u, z1, z2, sigma1: s1, sigma2: s2, seed }).collect();
            let (z1, z2) = *z.points.last().expect("grid nonempty");
            let angle = (s2 as f64 * z2).atan2(s1 as f64 * z1).clamp(0.0, std::f64::consts::FRAC_PI_2);
            Ok::<_, String>((rows, AngleRow { replica: i, angle }))
        },
        |res| {
            let (rows, angle) = res.map_err(Failure::Usage)?;
            z_rows.extend(rows);
            angles.push(angle);
            Ok(())
        },
    )?;
    write_all(&mut create(&cfg.out, "z.csv")?, &write_csv(&z_rows))?;
    write_all(&mut create(&cfg.out, "angles.csv")?, &write_csv(&angles))?;
    let samples: Vec<f64> = angles.iter().map(|a| a.angle).collect();
    let summary = SummaryZ {
        variant: cfg.variant.to_string(),
        dt,
        replicas: cfg.replicas,
        master_seed: cfg.seed,
        angle_ks: ks_statistic(&samples, angle_cdf_clamped).ok().map(|k| k.d),
    };
    write_summary(&cfg.out, &summary)?;
    Ok(cfg.n * cfg.replicas)
}
