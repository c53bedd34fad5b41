use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use prudent_walk::formats::{read_csv, read_jsonl, TrajectoryRecord, ValuesRecord, ZRow};
use prudent_walk::walk2d::{simulate, FirstStep, Variant};

fn prudent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prudent")).args(args).output().expect("binary runs")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn output_bytes_do_not_depend_on_threads() {
    let tmp = tempfile::tempdir().unwrap();
    for model in ["prudent2d", "corner", "walk3d", "effective", "zprocess"] {
        let (a, b) = (tmp.path().join(format!("{model}-1")), tmp.path().join(format!("{model}-8")));
        for (dir, threads) in [(&a, "1"), (&b, "8")] {
            let o = prudent(&["simulate", "--variant", model, "--n", "1000", "--replicas", "4", "--seed", "3", "--threads", threads, "--out", &out_arg(dir)]);
            assert!(o.status.success(), "{model}: {}", String::from_utf8_lossy(&o.stderr));
        }
        assert_eq!(read_dir_sorted(&a), read_dir_sorted(&b), "{model}");
    }
}

#[test]
fn trajectories_replay_from_their_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prudent(&["simulate", "--variant", "prudent2d", "--n", "500", "--replicas", "3", "--first-step", "right", "--out", &out_arg(tmp.path())]);
    assert!(o.status.success());
    let recs: Vec<TrajectoryRecord> = read_jsonl(&fs::read_to_string(tmp.path().join("trajectories.jsonl")).unwrap()).unwrap();
    assert_eq!(recs.len(), 3);
    for r in &recs {
        assert_eq!(r.path().unwrap(), simulate(500, r.seed, Variant::Prudent, FirstStep::Forced(prudent_walk::lattice::Dir::Right)));
    }
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["quadrant_counts"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum::<u64>(), 3);
    // too few replicas for a speed estimate
    assert!(summary["speed"].is_null());
    for (r, rec) in summary["per_replica"].as_array().unwrap().iter().zip(&recs) {
        let end = *rec.path().unwrap().sites().last().unwrap();
        assert_eq!(r["l1_norm"].as_u64().unwrap(), (end.x.abs() + end.y.abs()) as u64);
    }
}

#[test]
fn effective_summary_reports_time_ratio() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prudent(&["simulate", "--variant", "effective", "--n", "1e5", "--replicas", "2", "--out", &out_arg(tmp.path())]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("summary.json")).unwrap()).unwrap();
    let ratio = summary["time_ratio"]["mean"].as_f64().unwrap();
    assert!((ratio - 7.0 / 3.0).abs() < 0.05, "{ratio}");
    let hats: Vec<ValuesRecord> = read_jsonl(&fs::read_to_string(tmp.path().join("hat.jsonl")).unwrap()).unwrap();
    assert_eq!(hats[0].hat().unwrap().len(), 100_000);
}

#[test]
fn z_csv_parses_back() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prudent(&["simulate", "--variant", "zprocess", "--n", "1e4", "--replicas", "2", "--out", &out_arg(tmp.path())]);
    assert!(o.status.success());
    let rows: Vec<ZRow> = read_csv(&fs::read_to_string(tmp.path().join("z.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2 * 101);
    for r in &rows {
        assert!((r.z1.abs() + r.z2.abs() - 3.0 * r.u / 7.0).abs() < 1e-9);
    }
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = tmp.path().join("run.conf");
    fs::write(&conf, format!("variant = corner\nn = 300\nreplicas = 2\nseed = 11\nout = {}\n", tmp.path().join("from-file").display())).unwrap();
    let flagged = tmp.path().join("flagged");
    let o = prudent(&["simulate", "--config", conf.to_str().unwrap(), "--replicas", "1", "--out", &out_arg(&flagged)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!tmp.path().join("from-file").exists());
    let recs: Vec<TrajectoryRecord> = read_jsonl(&fs::read_to_string(flagged.join("trajectories.jsonl")).unwrap()).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].n, 300);
    assert_eq!(recs[0].variant, prudent_walk::formats::Model::Corner);
    // the echoed configuration is itself a valid config file
    let echoed = String::from_utf8(o.stdout).unwrap();
    let conf_text: String = echoed.lines().take_while(|l| l.contains(" = ")).map(|l| format!("{l}\n")).collect();
    let again = tmp.path().join("again.conf");
    fs::write(&again, conf_text).unwrap();
    let o = prudent(&["simulate", "--config", again.to_str().unwrap(), "--out", &out_arg(&tmp.path().join("again"))]);
    assert!(o.status.success());
    assert_eq!(fs::read(flagged.join("trajectories.jsonl")).unwrap(), fs::read(tmp.path().join("again/trajectories.jsonl")).unwrap());
}

#[test]
fn usage_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(prudent(&["simulate", "--variant", "hexagonal"]).status.code(), Some(2));
    assert_eq!(prudent(&["frobnicate"]).status.code(), Some(2));
    let conf = tmp.path().join("bad.conf");
    fs::write(&conf, "n = 10\nvariant = nope\n").unwrap();
    let o = prudent(&["simulate", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let file = tmp.path().join("file");
    fs::write(&file, "").unwrap();
    let o = prudent(&["simulate", "--n", "10", "--out", &out_arg(&file.join("sub"))]);
    assert_eq!(o.status.code(), Some(2), "unwritable output");
}

#[test]
fn malformed_plot_input_names_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("angles.csv");
    fs::write(&bad, "replica,angle\n0,0.5\n1,abc\n").unwrap();
    let o = prudent(&["plot", "--kind", "angle", "--out", &out_arg(tmp.path()), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));
}

fn view_box(svg: &str) -> Vec<f64> {
    let start = svg.find("viewBox=\"").unwrap() + 9;
    let end = start + svg[start..].find('"').unwrap();
    svg[start..end].split(' ').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn trajectory_svg_frames_the_walk() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    assert!(prudent(&["simulate", "--n", "50000", "--seed", "5", "--out", &out_arg(&sim)]).status.success());
    let o = prudent(&["plot", "--kind", "trajectory", "--svg", "--out", &out_arg(tmp.path()), sim.join("trajectories.jsonl").to_str().unwrap()]);
    assert!(o.status.success());
    let svg = fs::read_to_string(tmp.path().join("trajectory.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(svg.trim_end().ends_with("</svg>"));
    let rec = &read_jsonl::<TrajectoryRecord>(&fs::read_to_string(sim.join("trajectories.jsonl")).unwrap()).unwrap()[0];
    let path = rec.path().unwrap();
    let (xs, ys): (Vec<i32>, Vec<i32>) = path.sites().iter().map(|s| (s.x, s.y)).unzip();
    let (x0, x1, y0, y1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap(), *ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    assert_eq!(view_box(&svg), vec![x0 as f64, -y1 as f64, (x1 - x0) as f64, (y1 - y0) as f64]);
}

#[test]
fn empty_trajectory_draws_a_point() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    assert!(prudent(&["simulate", "--n", "0", "--out", &out_arg(&sim)]).status.success());
    let o = prudent(&["plot", "--kind", "trajectory", "--svg", "--out", &out_arg(tmp.path()), sim.join("trajectories.jsonl").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(tmp.path().join("trajectory.svg")).unwrap();
    assert_eq!(view_box(&svg), vec![0.0; 4]);
    assert!(svg.contains("points=\"0,0\""));
}

#[test]
fn angle_overlay_theory_is_monotone() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    assert!(prudent(&["simulate", "--variant", "zprocess", "--n", "1e3", "--replicas", "60", "--out", &out_arg(&sim)]).status.success());
    let o = prudent(&["plot", "--kind", "angle", "--svg", "--out", &out_arg(tmp.path()), sim.join("angles.csv").to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(tmp.path().join("angle_cdf.csv")).unwrap();
    let theory: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(theory.len(), 60);
    assert!(theory.windows(2).all(|w| w[0] <= w[1]));
    let svg = fs::read_to_string(tmp.path().join("angle_cdf.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn norms_plot_reads_simulation_output() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    assert!(prudent(&["simulate", "--variant", "walk3d", "--n", "1e4", "--replicas", "3", "--out", &out_arg(&sim)]).status.success());
    let o = prudent(&["plot", "--kind", "norms", "--out", &out_arg(tmp.path()), sim.join("norms.csv").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(fs::read_to_string(tmp.path().join("norms_loglog.csv")).unwrap().starts_with("log10_t,log10_mean\n"));
}

#[test]
fn verify_subset_passes_and_tamper_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prudent(&["verify", "--quick", "--criteria", "4,5,9", "--out", &out_arg(tmp.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(tmp.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["criteria"].as_array().unwrap().len(), 3);
    let o = prudent(&["verify", "--quick", "--criteria", "5", "--tamper", "0.6", "--out", &out_arg(tmp.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(prudent(&["verify", "--criteria", "99"]).status.code(), Some(2));
}

#[test]
fn bench_prints_a_table() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prudent(&["bench", "--max-n", "1e4", "--out", &out_arg(tmp.path())]);
    // timing verdicts depend on the machine; only the output shape is checked
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let csv = fs::read_to_string(tmp.path().join("bench.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("dim,n,indexed_steps_per_s,naive_steps_per_s,ratio\n"));
}
