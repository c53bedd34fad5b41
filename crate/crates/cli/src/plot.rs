use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use prudent_walk::formats::{read_csv, read_jsonl, AngleRow, FormatError, Model, TrajectoryRecord};
use prudent_walk::limit::angle_cdf_clamped;
use prudent_walk::walk3d::NormRow;

use crate::config::RunConfig;
use crate::svg::{self, Series};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// One trajectory from a `trajectories.jsonl` (3D ones projected on x, y).
    Trajectory,
    /// Empirical angle CDF from `angles.csv` files against the limit law.
    Angle,
    /// Log-log norm series from a `norms.csv`.
    Norms,
}

pub fn run(cfg: &RunConfig, kind: PlotKind, replica: usize, inputs: &[PathBuf]) -> Result<(), Failure> {
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Usage(format!("{}: {e}", cfg.out.display())))?;
    let single = || match inputs {
        [one] => Ok(one),
        _ => Err(Failure::Usage(format!("{kind:?} plots take exactly one input"))),
    };
    let (name, csv, svg) = match kind {
        PlotKind::Trajectory => {
            let (csv, svg) = trajectory(single()?, replica)?;
            ("trajectory", csv, svg)
        }
        PlotKind::Angle => {
            let (csv, svg) = angle(inputs)?;
            ("angle_cdf", csv, svg)
        }
        PlotKind::Norms => {
            let (csv, svg) = norms(single()?)?;
            ("norms_loglog", csv, svg)
        }
    };
    let csv_path = cfg.out.join(format!("{name}.csv"));
    fs::write(&csv_path, csv)?;
    println!("wrote {}", csv_path.display());
    if cfg.svg {
        let svg_path = cfg.out.join(format!("{name}.svg"));
        fs::write(&svg_path, svg)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn malformed(path: &Path, e: FormatError) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn trajectory(path: &Path, replica: usize) -> Result<(String, String), Failure> {
    let records: Vec<TrajectoryRecord> = read_jsonl(&read(path)?).map_err(|e| malformed(path, e))?;
    let rec = records
        .get(replica)
        .ok_or_else(|| Failure::Usage(format!("{}: no record {replica} ({} records)", path.display(), records.len())))?;
    let bad = |e: String| Failure::Usage(format!("{}: line {}: {e}", path.display(), replica + 1));
    let (points, csv): (Vec<(i64, i64)>, String) = if rec.variant == Model::Walk3d {
        let p = rec.path_3d().map_err(bad)?;
        let csv = std::iter::once("x,y,z\n".to_string()).chain(p.sites().iter().map(|s| format!("{},{},{}\n", s.x, s.y, s.z))).collect();
        (p.sites().iter().map(|s| (s.x as i64, s.y as i64)).collect(), csv)
    } else {
        let p = rec.path().map_err(bad)?;
        let csv = std::iter::once("x,y\n".to_string()).chain(p.sites().iter().map(|s| format!("{},{}\n", s.x, s.y))).collect();
        (p.sites().iter().map(|s| (s.x as i64, s.y as i64)).collect(), csv)
    };
    Ok((csv, trajectory_svg(&points)))
}

/// One polyline, y pointing up; the viewBox is the bounding rectangle.
pub fn trajectory_svg(points: &[(i64, i64)]) -> String {
    let (x_min, x_max) = (points.iter().map(|p| p.0).min().unwrap_or(0), points.iter().map(|p| p.0).max().unwrap_or(0));
    let (y_min, y_max) = (points.iter().map(|p| p.1).min().unwrap_or(0), points.iter().map(|p| p.1).max().unwrap_or(0));
    let flipped = Series { points: points.iter().map(|&(x, y)| (x as f64, -y as f64)).collect(), color: "black" };
    let view = (x_min as f64, -y_max as f64, (x_max - x_min) as f64, (y_max - y_min) as f64);
    svg::render(view, &[flipped], false)
}

fn angle(inputs: &[PathBuf]) -> Result<(String, String), Failure> {
    let mut angles = Vec::new();
    for path in inputs {
        let rows: Vec<AngleRow> = read_csv(&read(path)?).map_err(|e| malformed(path, e))?;
        angles.extend(rows.into_iter().map(|r| r.angle));
    }
    if angles.is_empty() {
        return Err(Failure::Usage("no angle samples".into()));
    }
    angles.sort_by(f64::total_cmp);
    let n = angles.len() as f64;
    let mut csv = String::from("angle,empirical,theoretical\n");
    let mut empirical = vec![(0.0, 1.0)];
    let mut theory = Vec::new();
    for (i, &a) in angles.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        let g = angle_cdf_clamped(a);
        csv.push_str(&format!("{a},{f},{g}\n"));
        empirical.push((a, 1.0 - i as f64 / n));
        empirical.push((a, 1.0 - f));
    }
    empirical.push((std::f64::consts::FRAC_PI_2, 0.0));
    for i in 0..=200 {
        let a = std::f64::consts::FRAC_PI_2 * i as f64 / 200.0;
        theory.push((a, 1.0 - angle_cdf_clamped(a)));
    }
    let view = (0.0, 0.0, std::f64::consts::FRAC_PI_2, 1.0);
    let svg = svg::render(view, &[Series { points: empirical, color: "black" }, Series { points: theory, color: "red" }], true);
    Ok((csv, svg))
}

fn norms(path: &Path) -> Result<(String, String), Failure> {
    let rows: Vec<NormRow> = read_csv(&read(path)?).map_err(|e| malformed(path, e))?;
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.mean > 0.0).map(|r| ((r.t as f64).log10(), r.mean.log10())).collect();
    let mut csv = String::from("log10_t,log10_mean\n");
    for (x, y) in &pts {
        csv.push_str(&format!("{x},{y}\n"));
    }
    let (x_max, y_max) = pts.iter().fold((1.0f64, 1.0f64), |a, p| (a.0.max(p.0), a.1.max(p.1)));
    let view = (0.0, 0.0, x_max, y_max);
    let flipped = pts.iter().map(|&(x, y)| (x, y_max - y)).collect();
    Ok((csv, svg::render(view, &[Series { points: flipped, color: "black" }], true)))
}
