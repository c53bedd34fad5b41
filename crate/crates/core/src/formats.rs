//! Flat-file formats: JSON Lines trajectories and effective paths, CSV
//! tables. Every parser reports the 1-based line of the first bad record.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::effective::{EffectiveWalkPath, HatPath};
use crate::lattice::{LatticePath, PathError};
use crate::walk2d::{ExcursionRecord, Variant};
use crate::walk3d::{LatticePath3D, NormRow};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: {reason}")]
    Record { line: usize, reason: String },
    #[error("line {line}: expected header {expected:?}")]
    Header { line: usize, expected: &'static str },
}

/// Model a trajectory record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Prudent2d,
    Corner,
    Walk3d,
}

impl From<Variant> for Model {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Prudent => Model::Prudent2d,
            Variant::Corner => Model::Corner,
        }
    }
}

/// One trajectory: steps as a run-length string over `RLUD` (2D) or
/// `XxYyZz` (3D).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub variant: Model,
    pub n: u64,
    pub steps: String,
}

impl TrajectoryRecord {
    pub fn from_path(seed: u64, variant: Variant, path: &LatticePath) -> Self {
        TrajectoryRecord { seed, variant: variant.into(), n: path.len() as u64, steps: path.to_rle() }
    }

    pub fn from_path_3d(seed: u64, path: &LatticePath3D) -> Self {
        TrajectoryRecord { seed, variant: Model::Walk3d, n: path.len() as u64, steps: path.to_rle() }
    }

    pub fn path(&self) -> Result<LatticePath, String> {
        if self.variant == Model::Walk3d {
            return Err("3D record read as a 2D path".into());
        }
        let path = LatticePath::from_rle(&self.steps).map_err(|e: PathError| e.to_string())?;
        self.check_len(path.len())?;
        Ok(path)
    }

    pub fn path_3d(&self) -> Result<LatticePath3D, String> {
        if self.variant != Model::Walk3d {
            return Err("2D record read as a 3D path".into());
        }
        let path = LatticePath3D::from_rle(&self.steps).map_err(|e| e.to_string())?;
        self.check_len(path.len())?;
        Ok(path)
    }

    fn check_len(&self, len: usize) -> Result<(), String> {
        if len as u64 == self.n {
            Ok(())
        } else {
            Err(format!("n = {} but the steps decode to {len}", self.n))
        }
    }
}

/// An effective or hat path, values stored as successive differences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuesRecord {
    pub seed: u64,
    pub n: u64,
    pub values: Vec<i64>,
}

impl ValuesRecord {
    /// `values[0]` must be 0; it is implied and not stored.
    pub fn from_values(seed: u64, values: &[i64]) -> Self {
        assert_eq!(values.first(), Some(&0), "paths start at 0");
        let deltas = values.windows(2).map(|w| w[1] - w[0]).collect();
        ValuesRecord { seed, n: values.len() as u64 - 1, values: deltas }
    }

    pub fn from_effective(seed: u64, path: &EffectiveWalkPath) -> Self {
        Self::from_values(seed, path.values())
    }

    pub fn from_hat(seed: u64, hat: &HatPath) -> Self {
        Self::from_values(seed, hat.values())
    }

    pub fn decoded(&self) -> Result<Vec<i64>, String> {
        if self.values.len() as u64 != self.n {
            return Err(format!("n = {} but {} increments stored", self.n, self.values.len()));
        }
        let mut out = Vec::with_capacity(self.values.len() + 1);
        let mut v = 0i64;
        out.push(v);
        for &d in &self.values {
            v = v.checked_add(d).ok_or("value overflows i64")?;
            out.push(v);
        }
        Ok(out)
    }

    pub fn effective(&self) -> Result<EffectiveWalkPath, String> {
        EffectiveWalkPath::new(self.decoded()?).map_err(|e| e.to_string())
    }

    pub fn hat(&self) -> Result<HatPath, String> {
        HatPath::from_values(self.decoded()?).map_err(|e| e.to_string())
    }
}

/// One sample of the limit process at time `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZRow {
    pub u: f64,
    pub z1: f64,
    pub z2: f64,
    pub sigma1: i8,
    pub sigma2: i8,
    pub seed: u64,
}

impl ZRow {
    pub const CSV_HEADER: &'static str = "u,z1,z2,sigma1,sigma2,seed";

    pub fn to_csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.u, self.z1, self.z2, self.sigma1, self.sigma2, self.seed)
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 6 {
            return Err(format!("expected 6 fields, found {}", f.len()));
        }
        let sign = |s: &str| match s {
            "1" => Ok(1),
            "-1" => Ok(-1),
            _ => Err(format!("bad sign {s:?}")),
        };
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number {s:?}"));
        Ok(ZRow {
            u: num(f[0])?,
            z1: num(f[1])?,
            z2: num(f[2])?,
            sigma1: sign(f[3])?,
            sigma2: sign(f[4])?,
            seed: f[5].parse().map_err(|_| format!("bad seed {:?}", f[5]))?,
        })
    }
}

/// One endpoint angle in `[0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRow {
    pub replica: u64,
    pub angle: f64,
}

impl AngleRow {
    pub const CSV_HEADER: &'static str = "replica,angle";

    pub fn to_csv(&self) -> String {
        format!("{},{}", self.replica, self.angle)
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let (a, b) = line.trim().split_once(',').ok_or("expected 2 fields")?;
        Ok(AngleRow {
            replica: a.parse().map_err(|_| format!("bad replica {a:?}"))?,
            angle: b.parse().map_err(|_| format!("bad angle {b:?}"))?,
        })
    }
}

/// Rows that live in a headed CSV table.
pub trait CsvRow: Sized {
    const HEADER: &'static str;
    fn to_line(&self) -> String;
    fn from_line(line: &str) -> Result<Self, String>;
}

macro_rules! csv_row {
    ($($t:ty),*) => {$(
        impl CsvRow for $t {
            const HEADER: &'static str = <$t>::CSV_HEADER;
            fn to_line(&self) -> String {
                self.to_csv()
            }
            fn from_line(line: &str) -> Result<Self, String> {
                <$t>::from_csv(line)
            }
        }
    )*};
}

csv_row!(ZRow, AngleRow, NormRow, ExcursionRecord);

pub fn write_csv<T: CsvRow>(rows: &[T]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(T::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

/// Parses a table written by [`write_csv`]; blank lines are skipped.
pub fn read_csv<T: CsvRow>(text: &str) -> Result<Vec<T>, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == T::HEADER => {}
        other => return Err(FormatError::Header { line: other.map_or(1, |(i, _)| i + 1), expected: T::HEADER }),
    }
    lines.map(|(i, l)| T::from_line(l).map_err(|reason| FormatError::Record { line: i + 1, reason })).collect()
}

pub fn write_jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("plain data serializes"));
        out.push('\n');
    }
    out
}

pub fn read_jsonl<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|source| FormatError::Json { line: i + 1, source }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::{hat_path, simulate_effective_walk};
    use crate::rng::seeded;
    use crate::walk2d::{simulate, FirstStep};
    use crate::walk3d::simulate_3d;
    use proptest::prelude::*;

    #[test]
    fn trajectory_round_trip() {
        let path = simulate(500, 4, Variant::Corner, FirstStep::Natural);
        let rec = TrajectoryRecord::from_path(4, Variant::Corner, &path);
        let text = write_jsonl(&[rec.clone()]);
        assert!(text.contains("\"variant\":\"corner\""));
        let back: Vec<TrajectoryRecord> = read_jsonl(&text).unwrap();
        assert_eq!(back, vec![rec]);
        assert_eq!(back[0].path().unwrap(), path);
        assert!(back[0].path_3d().is_err());
    }

    #[test]
    fn trajectory_3d_round_trip() {
        let path = simulate_3d(400, 2);
        let rec = TrajectoryRecord::from_path_3d(2, &path);
        let back: Vec<TrajectoryRecord> = read_jsonl(&write_jsonl(&[rec])).unwrap();
        assert_eq!(back[0].path_3d().unwrap(), path);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let rec = TrajectoryRecord { seed: 0, variant: Model::Prudent2d, n: 3, steps: "R2".into() };
        assert!(rec.path().is_err());
    }

    #[test]
    fn values_round_trip() {
        let path = simulate_effective_walk(1000, &mut seeded(6));
        let hat = hat_path(&path);
        let recs = vec![ValuesRecord::from_effective(6, &path), ValuesRecord::from_hat(6, &hat)];
        let back: Vec<ValuesRecord> = read_jsonl(&write_jsonl(&recs)).unwrap();
        assert_eq!(back[0].effective().unwrap(), path);
        assert_eq!(back[1].hat().unwrap().values(), hat.values());
        assert_eq!(back[1].hat().unwrap().clock(), hat.clock());
    }

    #[test]
    fn bad_jsonl_line_is_reported() {
        let text = "{\"seed\":1,\"n\":0,\"values\":[]}\n\nnot json\n";
        match read_jsonl::<ValuesRecord>(text) {
            Err(FormatError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_csv_line_is_reported() {
        let text = format!("{}\n0.5,0.1,0.2,1,-1,3\n0.6,x,0.2,1,1,3\n", ZRow::CSV_HEADER);
        match read_csv::<ZRow>(&text) {
            Err(FormatError::Record { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_csv::<ZRow>("u,z\n"), Err(FormatError::Header { line: 1, .. })));
        assert!(read_csv::<ZRow>("").is_err());
    }

    proptest! {
        #[test]
        fn z_rows_round_trip(u in 0.0f64..1.0, z1 in -1e3f64..1e3, z2 in -1e3f64..1e3, s1: bool, s2: bool, seed: u64) {
            let row = ZRow { u, z1, z2, sigma1: if s1 { 1 } else { -1 }, sigma2: if s2 { 1 } else { -1 }, seed };
            prop_assert_eq!(read_csv::<ZRow>(&write_csv(&[row])).unwrap(), vec![row]);
        }

        #[test]
        fn norm_and_angle_rows_round_trip(t: u64, mean in 0.0f64..1e9, se in 0.0f64..1e3, k in 0usize..1000, a in 0.0f64..1.6) {
            let row = NormRow { t, mean, stderr: se, nseeds: k };
            prop_assert_eq!(read_csv::<NormRow>(&write_csv(&[row])).unwrap(), vec![row]);
            let row = AngleRow { replica: t, angle: a };
            prop_assert_eq!(read_csv::<AngleRow>(&write_csv(&[row])).unwrap(), vec![row]);
        }

        #[test]
        fn value_deltas_round_trip(v in proptest::collection::vec(-50i64..50, 0..100), seed: u64) {
            let mut values = vec![0];
            values.extend(v);
            let rec = ValuesRecord::from_values(seed, &values);
            prop_assert_eq!(rec.decoded().unwrap(), values);
        }
    }

    #[test]
    fn excursion_table_round_trip() {
        let path = simulate(3000, 9, Variant::Prudent, FirstStep::Forced(crate::lattice::Dir::Right));
        let rows = crate::walk2d::excursion_decompose(&path).unwrap();
        assert!(!rows.is_empty());
        assert_eq!(read_csv::<ExcursionRecord>(&write_csv(&rows)).unwrap(), rows);
    }
}
