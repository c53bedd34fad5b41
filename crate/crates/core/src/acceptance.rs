//! The verification suite: thirteen checks of the limit laws and of the
//! simulators, each turned into [`StatReport`]s.
//!
//! Two scales exist. `Full` runs the sample sizes the checks are specified
//! at; `Quick` uses roughly ten times less work and tolerances twice as wide
//! (p-value floors halved, bands doubled around their centre).

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::effective::law::PerturbedLaw;
use crate::effective::{
    exit_time_pmf_f64, hat_path, ladder_decompose, simulate_effective_walk_with, EffectiveWalkPath, IncrementLaw,
    IncrementSampler,
};
use crate::lattice::{Dir, Site};
use crate::limit::{angle_cdf_clamped, diffusive_embedding, sample_brownian, variance, z_process, SPEED};
use crate::rng::{mix, replica_rng};
use crate::stats::{
    chi_square, chi_square_homogeneity, ks_statistic, loglog_slope, pool_tail, speed_estimate, sup_deviation_diagnostics,
    Criterion, Diagnostics, StatReport, Verdict,
};
use crate::walk2d::{
    obstacle_free, ray_meets_quadrant, Coupler, ExcursionKind, ExcursionTracker, FirstStep, NaiveOccupancy, Occupancy,
    Quadrant, Variant, WalkState,
};
use crate::walk3d::{endpoint_norm_series, geometric_grid, naive_allowed_directions_3d, Walk3State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Full,
    Quick,
}

pub const CRITERIA: [(u8, &str); 13] = [
    (1, "speed law"),
    (2, "angle law"),
    (3, "quadrant uniformity"),
    (4, "excursion width law"),
    (5, "overshoot law"),
    (6, "hat anchoring"),
    (7, "time change"),
    (8, "index correctness"),
    (9, "limit process ray"),
    (10, "crossing decay"),
    (11, "3D exponent"),
    (12, "coupling fidelity"),
    (13, "diagnostics trend"),
];

/// Checks of estimator behaviour that sit outside the thirteen laws but
/// still pass or fail.
pub const SUPPLEMENTARY: [(u8, &str); 1] = [(14, "quadrant stability")];

/// Wall-clock budget of one criterion, where one is set.
pub fn criterion_budget(scale: Scale, id: u8) -> Option<Duration> {
    match (scale, id) {
        (Scale::Full, 1) => Some(Duration::from_secs(300)),
        (Scale::Full, 2) => Some(Duration::from_secs(900)),
        _ => None,
    }
}

pub fn suite_budget(scale: Scale) -> Duration {
    match scale {
        Scale::Full => Duration::from_secs(1800),
        Scale::Quick => Duration::from_secs(120),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub scale: Scale,
    pub master_seed: u64,
    /// Replaces the increment law everywhere it is sampled. Used to check
    /// that the suite notices a wrong law.
    pub tamper: Option<PerturbedLaw>,
}

impl SuiteConfig {
    pub fn new(scale: Scale, master_seed: u64) -> Self {
        SuiteConfig { scale, master_seed, tamper: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub supplementary: bool,
    pub reports: Vec<StatReport>,
}

impl CriterionOutcome {
    /// `C3` for a criterion, `S1` for the first supplementary check.
    pub fn label(&self) -> String {
        if self.supplementary {
            format!("S{}", self.id as usize - CRITERIA.len())
        } else {
            format!("C{}", self.id)
        }
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.verdict != Verdict::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub scale: Scale,
    pub master_seed: u64,
    pub criteria: Vec<CriterionOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionOutcome::passed)
    }

    pub fn reports(&self) -> impl Iterator<Item = &StatReport> {
        self.criteria.iter().flat_map(|c| c.reports.iter())
    }
}

#[derive(Debug, Clone, Copy)]
enum SuiteLaw {
    Exact,
    Perturbed(PerturbedLaw),
}

impl IncrementSampler for SuiteLaw {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        match self {
            SuiteLaw::Exact => IncrementLaw.sample(rng),
            SuiteLaw::Perturbed(p) => p.sample(rng),
        }
    }
}

/// Sample sizes and tolerances for one scale.
#[derive(Debug, Clone)]
struct Params {
    walk_t: u64,
    speed_reps: u64,
    speed_tol: f64,
    angle_reps: u64,
    ks_max: f64,
    quadrant_reps: u64,
    quadrant_t: u64,
    quadrant_tol: f64,
    stability_min: f64,
    lemma_min: u64,
    p_min: f64,
    ladders: u64,
    ladder_path_len: usize,
    time_seeds: u64,
    time_n: usize,
    time_tol: f64,
    time_fraction: f64,
    index_steps: u64,
    z_samples: u64,
    z_dt: f64,
    cross_reps: u64,
    cross_blocks: Vec<(usize, usize)>,
    cross_slope_max: f64,
    alpha_seeds: u64,
    alpha_t: (u64, u64),
    alpha_band: (f64, f64),
    triples: u64,
    diag_seeds: u64,
    diag_ns: Vec<usize>,
    diag_time_max: f64,
}

impl Params {
    fn for_scale(scale: Scale) -> Self {
        let full = Params {
            walk_t: 1_000_000,
            speed_reps: 200,
            speed_tol: 0.02,
            angle_reps: 2000,
            ks_max: 0.05,
            quadrant_reps: 4000,
            quadrant_t: 100_000,
            quadrant_tol: 0.03,
            stability_min: 0.95,
            lemma_min: 100_000,
            p_min: 0.01,
            ladders: 100_000,
            ladder_path_len: 10_000,
            time_seeds: 200,
            time_n: 1_000_000,
            time_tol: 0.01,
            time_fraction: 0.99,
            index_steps: 100_000,
            z_samples: 1000,
            z_dt: 1e-4,
            cross_reps: 10_000,
            cross_blocks: vec![(4, 8), (8, 16), (16, 32), (32, 65)],
            cross_slope_max: -1.2,
            alpha_seeds: 50,
            alpha_t: (10_000, 1_000_000),
            alpha_band: (0.66, 0.85),
            triples: 100_000,
            diag_seeds: 50,
            diag_ns: vec![10_000, 100_000, 1_000_000],
            diag_time_max: 0.01,
        };
        match scale {
            Scale::Full => full,
            Scale::Quick => Params {
                speed_reps: 30,
                speed_tol: 0.04,
                angle_reps: 200,
                ks_max: 0.1,
                quadrant_reps: 400,
                quadrant_t: 10_000,
                quadrant_tol: 0.06,
                stability_min: 0.90,
                lemma_min: 10_000,
                p_min: 0.005,
                ladders: 10_000,
                time_seeds: 50,
                time_n: 100_000,
                time_tol: 0.02,
                time_fraction: 0.98,
                index_steps: 10_000,
                z_samples: 100,
                cross_reps: 1000,
                cross_blocks: vec![(2, 4), (4, 8), (8, 16), (16, 33)],
                cross_slope_max: -0.6,
                alpha_seeds: 5,
                alpha_t: (1_000, 100_000),
                alpha_band: (0.565, 0.945),
                triples: 10_000,
                diag_seeds: 10,
                diag_ns: vec![1_000, 10_000, 100_000],
                diag_time_max: 0.02,
                ..full
            },
        }
    }
}

/// Endpoint data of one 2D replica.
#[derive(Debug, Clone, Copy)]
struct WalkEnd {
    end: Site,
    quadrant: Quadrant,
    early_quadrant: Quadrant,
}

#[derive(Debug, Default)]
struct AnchorTally {
    paths: u64,
    ladder_times: u64,
    violations: u64,
}

/// Runs criteria, sharing expensive samples between them.
pub struct Suite {
    cfg: SuiteConfig,
    params: Params,
    law: SuiteLaw,
    walks: Option<Vec<WalkEnd>>,
    ladder_anchor: Option<AnchorTally>,
    time_anchor: Option<AnchorTally>,
    time_fractions: Option<(Vec<f64>, Vec<Vec<Diagnostics>>)>,
}

/// Master seed of criterion `id`.
fn stream(cfg: &SuiteConfig, id: u64) -> u64 {
    mix(cfg.master_seed, 0xACCE_0000 + id)
}

fn report_seeds(r: StatReport, cfg: &SuiteConfig, id: u64, seeds: u64) -> StatReport {
    r.seeds(stream(cfg, id), seeds)
}

impl Suite {
    pub fn new(cfg: SuiteConfig) -> Self {
        Suite {
            params: Params::for_scale(cfg.scale),
            law: cfg.tamper.map_or(SuiteLaw::Exact, SuiteLaw::Perturbed),
            cfg,
            walks: None,
            ladder_anchor: None,
            time_anchor: None,
            time_fractions: None,
        }
    }

    /// Runs every criterion in order, calling `done` after each.
    pub fn run_all<F: FnMut(&CriterionOutcome, Duration)>(mut self, mut done: F) -> SuiteReport {
        let mut criteria = Vec::new();
        for (id, _) in CRITERIA.iter().chain(&SUPPLEMENTARY).copied() {
            let start = Instant::now();
            let outcome = self.run(id);
            done(&outcome, start.elapsed());
            criteria.push(outcome);
        }
        SuiteReport { scale: self.cfg.scale, master_seed: self.cfg.master_seed, criteria }
    }

    pub fn run(&mut self, id: u8) -> CriterionOutcome {
        let reports = match id {
            1 => self.speed(),
            2 => self.angle(),
            3 => self.quadrants(),
            4 => self.lemma(),
            5 => self.overshoots(),
            6 => self.anchoring(),
            7 => self.time_change(),
            8 => self.index(),
            9 => self.ray(),
            10 => self.crossing(),
            11 => self.exponent(),
            12 => self.coupling(),
            13 => self.diagnostics(),
            14 => self.stability(),
            _ => panic!("no criterion {id}"),
        };
        let title = CRITERIA.iter().chain(&SUPPLEMENTARY).find(|c| c.0 == id).map_or("", |c| c.1).to_string();
        CriterionOutcome { id, title, supplementary: id as usize > CRITERIA.len(), reports }
    }

    /// 2D prudent replicas at `walk_t` with a random first step; shared by
    /// the speed, angle and quadrant-stability checks.
    fn walks(&mut self) -> &[WalkEnd] {
        if self.walks.is_none() {
            let p = &self.params;
            let (seed, t) = (stream(&self.cfg, 1), p.walk_t);
            let reps = p.angle_reps.max(p.speed_reps);
            let ends = (0..reps)
                .into_par_iter()
                .map(|r| {
                    let mut rng = replica_rng(seed, r);
                    let mut w = WalkState::new(Variant::Prudent, false);
                    w.run(t / 10, FirstStep::Natural, &mut rng);
                    let early_quadrant = w.quadrant();
                    w.run(t - t / 10, FirstStep::Natural, &mut rng);
                    WalkEnd { end: w.position(), quadrant: w.quadrant(), early_quadrant }
                })
                .collect();
            self.walks = Some(ends);
        }
        self.walks.as_deref().expect("just filled")
    }

    fn speed(&mut self) -> Vec<StatReport> {
        let (reps, t, tol) = (self.params.speed_reps, self.params.walk_t, self.params.speed_tol);
        let norms: Vec<u64> = self.walks()[..reps as usize].iter().map(|w| w.end.l1_norm()).collect();
        let est = speed_estimate(&norms, t).expect("enough replicas");
        let r = StatReport::new(format!("mean |g_t|_1/t, t={t}"), est.mean, Criterion::Within(SPEED - tol, SPEED + tol))
            .estimate(est.mean, Some(est.stderr))
            .samples(reps)
            .note(format!("target 3/7 = {SPEED:.6}, 95% CI [{:.5}, {:.5}]", est.ci_low, est.ci_high));
        vec![report_seeds(r, &self.cfg, 1, reps)]
    }

    fn angle(&mut self) -> Vec<StatReport> {
        let (reps, ks_max, t) = (self.params.angle_reps, self.params.ks_max, self.params.walk_t);
        let angles: Vec<f64> = self.walks()[..reps as usize]
            .iter()
            .map(|w| {
                let (s1, s2) = w.quadrant.signs();
                let (x, y) = (s1 as f64 * w.end.x as f64, s2 as f64 * w.end.y as f64);
                y.atan2(x).clamp(0.0, std::f64::consts::FRAC_PI_2)
            })
            .collect();
        let ks = ks_statistic(&angles, angle_cdf_clamped).expect("enough samples");
        let r = StatReport::new(format!("angle KS distance, t={t}"), ks.d, Criterion::Below(ks_max))
            .samples(reps)
            .note(format!("endpoints reflected into quadrant 1 by settled quadrant; 1.36/sqrt(n) = {:.4}", ks.threshold));
        vec![report_seeds(r, &self.cfg, 1, reps)]
    }

    fn quadrants(&mut self) -> Vec<StatReport> {
        let p = self.params.clone();
        let seed = stream(&self.cfg, 3);
        let labels: Vec<Quadrant> = (0..p.quadrant_reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = replica_rng(seed, r);
                let mut w = WalkState::new(Variant::Prudent, false);
                w.run(p.quadrant_t, FirstStep::Natural, &mut rng);
                w.quadrant()
            })
            .collect();
        let mut reports = Vec::new();
        for q in [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4] {
            let f = labels.iter().filter(|&&l| l == q).count() as f64 / labels.len() as f64;
            let r = StatReport::new(
                format!("frequency of Q{}, t={}", q.label(), p.quadrant_t),
                f,
                Criterion::Within(0.25 - p.quadrant_tol, 0.25 + p.quadrant_tol),
            )
            .estimate(f, Some((f * (1.0 - f) / labels.len() as f64).sqrt()))
            .samples(p.quadrant_reps);
            reports.push(report_seeds(r, &self.cfg, 3, p.quadrant_reps));
        }
        reports
    }

    /// The settled-quadrant label at `t/10` should match the label at `t`.
    fn stability(&mut self) -> Vec<StatReport> {
        let (t, min) = (self.params.walk_t, self.params.stability_min);
        let walks = self.walks();
        let n = walks.len() as u64;
        let stable = walks.iter().filter(|w| w.quadrant == w.early_quadrant).count() as f64 / n as f64;
        let r = StatReport::new(format!("quadrant label at t={} equals label at t={t}", t / 10), stable, Criterion::AtLeast(min))
            .estimate(stable, Some((stable * (1.0 - stable) / n as f64).sqrt()))
            .samples(n);
        vec![report_seeds(r, &self.cfg, 1, n)]
    }

    fn lemma(&mut self) -> Vec<StatReport> {
        const WALLS: [u64; 3] = [2, 3, 5];
        const M_MAX: usize = 200;
        let p = self.params.clone();
        let seed = stream(&self.cfg, 4);
        let mut hist = vec![vec![0u64; M_MAX + 1]; WALLS.len()];
        let mut next = 0u64;
        const CHUNK: u64 = 2048;
        while hist.iter().any(|h| h.iter().sum::<u64>() < p.lemma_min) {
            let chunk: Vec<Vec<(u64, u64)>> = (next..next + CHUNK)
                .into_par_iter()
                .map(|r| {
                    let mut rng = replica_rng(seed, r);
                    let mut w = WalkState::new(Variant::Prudent, false);
                    let mut tracker = ExcursionTracker::new(Variant::Prudent);
                    w.apply(Dir::Right);
                    tracker.push(w.position());
                    let mut out = Vec::new();
                    loop {
                        w.step(&mut rng);
                        if let Some(rec) = tracker.push(w.position()) {
                            out.push((rec.wall.expect("finite"), rec.displacement));
                            if w.rect().width().min(w.rect().height()) > 5 {
                                return out;
                            }
                        }
                    }
                })
                .collect();
            next += CHUNK;
            for (wall, m) in chunk.into_iter().flatten() {
                if let Some(i) = WALLS.iter().position(|&h| h == wall) {
                    hist[i][(m as usize - 1).min(M_MAX)] += 1;
                }
            }
        }
        WALLS
            .iter()
            .zip(&hist)
            .map(|(&h, counts)| {
                let n: u64 = counts.iter().sum();
                let probs = exit_time_pmf_f64(h, M_MAX as u64).expect("in range");
                let (obs, exp) = pool_tail(counts, &probs, n);
                let test = chi_square(&obs, &exp).expect("pooled");
                let mean = counts.iter().enumerate().map(|(i, &c)| (i + 1) as f64 * c as f64).sum::<f64>() / n as f64;
                let r = StatReport::new(format!("X_k law at wall {h} (chi-square p)"), test.p_value, Criterion::Above(p.p_min))
                    .estimate(mean, None)
                    .samples(n)
                    .note(format!("statistic {:.3} on {} dof; estimate is the mean width", test.statistic, test.dof));
                report_seeds(r, &self.cfg, 4, next)
            })
            .collect()
    }

    fn overshoots(&mut self) -> Vec<StatReport> {
        const J_MAX: usize = 40;
        let p = self.params.clone();
        let seed = stream(&self.cfg, 5);
        let law = self.law;
        let mut hist = vec![0u64; J_MAX + 1];
        let mut tally = AnchorTally::default();
        let mut next = 0u64;
        const CHUNK: u64 = 256;
        while hist.iter().sum::<u64>() < p.ladders {
            let chunk: Vec<(Vec<u64>, u64, u64)> = (next..next + CHUNK)
                .into_par_iter()
                .map(|r| {
                    let path = simulate_effective_walk_with(&law, p.ladder_path_len, &mut replica_rng(seed, r));
                    let d = ladder_decompose(&path);
                    let mags = d.overshoots[1..].iter().map(|o| o.unsigned_abs()).collect();
                    let hat = hat_path(&path);
                    (mags, hat.ladder().ladder_times.len() as u64, hat.anchor_violations() as u64)
                })
                .collect();
            next += CHUNK;
            for (mags, times, violations) in chunk {
                for m in mags {
                    hist[(m as usize).min(J_MAX)] += 1;
                }
                tally.paths += 1;
                tally.ladder_times += times;
                tally.violations += violations;
            }
        }
        self.ladder_anchor = Some(tally);
        let n: u64 = hist.iter().sum();
        let probs: Vec<f64> = (0..J_MAX).map(|j| 0.5f64.powi(j as i32 + 1)).collect();
        let (obs, exp) = pool_tail(&hist, &probs, n);
        let test = chi_square(&obs, &exp).expect("pooled");
        let mean = hist.iter().enumerate().map(|(j, &c)| j as f64 * c as f64).sum::<f64>() / n as f64;
        let r = StatReport::new("|overshoot| geometric(1/2) (chi-square p)", test.p_value, Criterion::Above(p.p_min))
            .estimate(mean, None)
            .samples(n)
            .note(format!("statistic {:.3} on {} dof; estimate is the mean |overshoot| (law: 1)", test.statistic, test.dof));
        vec![report_seeds(r, &self.cfg, 5, next)]
    }

    fn anchoring(&mut self) -> Vec<StatReport> {
        if self.ladder_anchor.is_none() {
            self.overshoots();
        }
        if self.time_anchor.is_none() {
            self.time_change();
        }
        let a = self.ladder_anchor.as_ref().expect("computed");
        let b = self.time_anchor.as_ref().expect("computed");
        let violations = a.violations + b.violations;
        let r = StatReport::new("hat values off 0/-1 at ladder times", violations as f64, Criterion::AtMost(0.0))
            .samples(a.ladder_times + b.ladder_times)
            .note(format!("{} paths checked", a.paths + b.paths));
        vec![report_seeds(r, &self.cfg, 5, a.paths + b.paths)]
    }

    fn time_change(&mut self) -> Vec<StatReport> {
        let p = self.params.clone();
        let seed = stream(&self.cfg, 7);
        let law = self.law;
        let results: Vec<(f64, u64, u64, Vec<Diagnostics>)> = (0..p.time_seeds)
            .into_par_iter()
            .map(|r| {
                let path = simulate_effective_walk_with(&law, p.time_n, &mut replica_rng(seed, r));
                let hat = hat_path(&path);
                let ratio = hat.clock()[p.time_n] as f64 / p.time_n as f64;
                let diags = if r < p.diag_seeds {
                    p.diag_ns
                        .iter()
                        .map(|&n| {
                            let prefix = EffectiveWalkPath::new(path.values()[..=n].to_vec()).expect("anchored");
                            let h = hat_path(&prefix);
                            let b = diffusive_embedding(&prefix).expect("nonempty");
                            sup_deviation_diagnostics(&prefix, &h, &b).expect("matched horizons")
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                (ratio, hat.ladder().ladder_times.len() as u64, hat.anchor_violations() as u64, diags)
            })
            .collect();
        let mut tally = AnchorTally::default();
        let mut ratios = Vec::new();
        let mut diags = Vec::new();
        for (ratio, times, violations, d) in results {
            ratios.push(ratio);
            tally.paths += 1;
            tally.ladder_times += times;
            tally.violations += violations;
            if !d.is_empty() {
                diags.push(d);
            }
        }
        self.time_anchor = Some(tally);
        let within = ratios.iter().filter(|&&x| (x - 7.0 / 3.0).abs() < p.time_tol).count() as f64 / ratios.len() as f64;
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let r = StatReport::new(format!("fraction with |t(n)/n - 7/3| < {}, n={}", p.time_tol, p.time_n), within, Criterion::AtLeast(p.time_fraction))
            .estimate(mean, None)
            .samples(p.time_seeds);
        let var = StatReport::new("Var xi from the exact law", variance(), Criterion::Informational)
            .estimate(variance(), None)
            .note("exact second moment of the increment law; 2 is the value quoted alongside the diffusive scaling");
        self.time_fractions = Some((ratios, diags));
        vec![report_seeds(r, &self.cfg, 7, p.time_seeds), var]
    }

    fn index(&mut self) -> Vec<StatReport> {
        let n = self.params.index_steps;
        let seed = stream(&self.cfg, 8);
        let runs: Vec<(String, u64, u64)> = vec![
            ("2D prudent", Variant::Prudent),
            ("2D corner", Variant::Corner),
        ]
        .into_iter()
        .enumerate()
        .map(|(i, (name, v))| {
            let (mismatches, weak) = index_run_2d(v, n, &mut replica_rng(seed, i as u64));
            (name.to_string(), mismatches, weak)
        })
        .chain(std::iter::once({
            let (mismatches, few) = index_run_3d(n, &mut replica_rng(seed, 2));
            ("3D".to_string(), mismatches, few)
        }))
        .collect();
        let mut reports = Vec::new();
        for (name, mismatches, weak) in runs {
            let r = StatReport::new(format!("{name}: index vs full scan mismatches, {n} steps"), mismatches as f64, Criterion::AtMost(0.0))
                .samples(n);
            reports.push(report_seeds(r, &self.cfg, 8, 3));
            let (label, criterion) = match name.as_str() {
                "2D prudent" => ("steps with fewer than 2 allowed directions", Criterion::AtMost(0.0)),
                "2D corner" => ("steps with no allowed direction", Criterion::AtMost(0.0)),
                _ => ("steps with fewer than 3 allowed directions (soft)", Criterion::Informational),
            };
            reports.push(StatReport::new(format!("{name}: {label}"), weak as f64, criterion).samples(n));
        }
        reports
    }

    fn ray(&mut self) -> Vec<StatReport> {
        let p = self.params.clone();
        let seed = stream(&self.cfg, 9);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let (worst, signs_ok) = (0..p.z_samples)
            .into_par_iter()
            .map(|r| {
                let mut rng = replica_rng(seed, r);
                let s1 = if rng.random::<bool>() { 1 } else { -1 };
                let s2 = if rng.random::<bool>() { 1 } else { -1 };
                let path = sample_brownian(p.z_dt, SPEED, &mut rng).expect("valid step");
                let z = z_process(&path, s1, s2, &grid).expect("horizon covers 3/7");
                let mut worst = 0.0f64;
                let mut ok = true;
                for (u, &(a, b)) in grid.iter().zip(&z.points) {
                    worst = worst.max((a.abs() + b.abs() - SPEED * u).abs());
                    ok &= (a == 0.0 || a.signum() as i8 == s1) && (b == 0.0 || b.signum() as i8 == s2);
                }
                (worst, ok)
            })
            .reduce(|| (0.0, true), |a, b| (a.0.max(b.0), a.1 && b.1));
        let r = StatReport::new("max | |Z_u|_1 - 3u/7 |", worst, Criterion::AtMost(p.z_dt)).samples(p.z_samples).note(format!("dt = {}", p.z_dt));
        let s = StatReport::new("Z samples with a coordinate of the wrong sign", (!signs_ok) as u8 as f64, Criterion::AtMost(0.0)).samples(p.z_samples);
        vec![report_seeds(r, &self.cfg, 9, p.z_samples), report_seeds(s, &self.cfg, 9, p.z_samples)]
    }

    fn crossing(&mut self) -> Vec<StatReport> {
        let p = self.params.clone();
        let seed = stream(&self.cfg, 10);
        let k_max = p.cross_blocks.last().expect("blocks").1 - 1;
        let flags: Vec<Vec<bool>> = (0..p.cross_reps)
            .into_par_iter()
            .map(|r| crossing_flags(k_max, CROSSING_STEP_CAP, &mut replica_rng(seed, r)))
            .collect();
        let censored = flags.iter().filter(|f| f.len() <= k_max).count();
        let mut freq = vec![0.0f64; k_max + 1];
        let mut seen = vec![0u64; k_max + 1];
        for f in &flags {
            for (k, &a) in f.iter().enumerate() {
                freq[k] += a as u8 as f64;
                seen[k] += 1;
            }
        }
        for (x, &n) in freq.iter_mut().zip(&seen) {
            *x /= n as f64;
        }
        let blocks: Vec<(f64, f64)> = p
            .cross_blocks
            .iter()
            .map(|&(lo, hi)| {
                let mean = freq[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
                (((lo as f64) * (hi - 1) as f64).sqrt(), mean)
            })
            .collect();
        let increases = blocks.windows(2).filter(|w| w[1].1 > w[0].1).count();
        let fit = loglog_slope(&blocks);
        let detail = blocks.iter().map(|(k, m)| format!("{k:.1}:{m:.5}")).collect::<Vec<_>>().join(" ");
        let mono = StatReport::new("increases of block-averaged P(A_k)", increases as f64, Criterion::AtMost(0.0))
            .samples(p.cross_reps)
            .note(detail);
        let slope = match fit {
            Ok(f) => StatReport::new("log-log slope of P(A_k)", f.slope, Criterion::AtMost(p.cross_slope_max)).estimate(f.slope, Some(f.stderr)),
            Err(e) => StatReport::new("log-log slope of P(A_k)", f64::NAN, Criterion::AtMost(p.cross_slope_max)).note(e.to_string()),
        }
        .samples(p.cross_reps);
        let cut = StatReport::new(format!("replicas stopped at {CROSSING_STEP_CAP} steps"), censored as f64, Criterion::Informational)
            .samples(p.cross_reps)
            .note("frequencies use the replicas that finished each k");
        vec![
            report_seeds(mono, &self.cfg, 10, p.cross_reps),
            report_seeds(slope, &self.cfg, 10, p.cross_reps),
            report_seeds(cut, &self.cfg, 10, p.cross_reps),
        ]
    }

    fn exponent(&mut self) -> Vec<StatReport> {
        let p = self.params.clone();
        let master = stream(&self.cfg, 11);
        let seeds: Vec<u64> = (0..p.alpha_seeds).map(|r| mix(master, r)).collect();
        let grid = geometric_grid(p.alpha_t.0, p.alpha_t.1, 8);
        let rows = endpoint_norm_series(&seeds, &grid);
        let cutoff = p.alpha_t.1 as f64 / 10f64.powf(1.5);
        let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.t as f64 >= cutoff * 0.999).map(|r| (r.t as f64, r.mean)).collect();
        let fit = loglog_slope(&pts).expect("positive points");
        let r = StatReport::new("3D exponent alpha", fit.slope, Criterion::Within(p.alpha_band.0, p.alpha_band.1))
            .estimate(fit.slope, Some(fit.stderr))
            .samples(p.alpha_seeds)
            .note(format!("fit over t in [{cutoff:.0}, {}]; reported against 0.75", p.alpha_t.1));
        vec![report_seeds(r, &self.cfg, 11, p.alpha_seeds)]
    }

    fn coupling(&mut self) -> Vec<StatReport> {
        const TOP: u64 = 11;
        let p = self.params.clone();
        let law = self.law;
        let cell = |x0: u64, y0: u64, x1: u64| {
            let c = |v: u64| v.min(TOP) - 1;
            ((c(x0) * TOP + c(y0)) * TOP + c(x1)) as usize
        };
        let coupled_seed = stream(&self.cfg, 12);
        let direct_seed = mix(coupled_seed, 1);
        let coupled: Vec<usize> = (0..p.triples)
            .into_par_iter()
            .map(|r| {
                let mut rng = replica_rng(coupled_seed, r);
                let mut c = Coupler::new();
                let mut d = [0u64; 3];
                for x in &mut d {
                    *x = c.sample_next(&law, &mut rng, u64::MAX).expect("decided").displacement;
                }
                cell(d[0], d[1], d[2])
            })
            .collect();
        let direct: Vec<usize> = (0..p.triples)
            .into_par_iter()
            .map(|r| {
                let mut rng = replica_rng(direct_seed, r);
                let mut w = WalkState::new(Variant::Prudent, false);
                let mut tracker = ExcursionTracker::new(Variant::Prudent);
                w.apply(Dir::Right);
                tracker.push(w.position());
                let mut d = Vec::with_capacity(3);
                while d.len() < 3 {
                    w.step(&mut rng);
                    if let Some(rec) = tracker.push(w.position()) {
                        d.push(rec.displacement);
                    }
                }
                cell(d[0], d[1], d[2])
            })
            .collect();
        let size = (TOP * TOP * TOP) as usize;
        let mut a = vec![0u64; size];
        let mut b = vec![0u64; size];
        coupled.iter().for_each(|&i| a[i] += 1);
        direct.iter().for_each(|&i| b[i] += 1);
        let test = chi_square_homogeneity(&a, &b).expect("enough data");
        let r = StatReport::new("(X_0, Y_0, X_1) coupled vs direct (chi-square p)", test.p_value, Criterion::Above(p.p_min))
            .samples(2 * p.triples)
            .note(format!("statistic {:.2} on {} dof; values above 10 pooled", test.statistic, test.dof));
        vec![report_seeds(r, &self.cfg, 12, 2 * p.triples)]
    }

    fn diagnostics(&mut self) -> Vec<StatReport> {
        if self.time_fractions.is_none() {
            self.time_change();
        }
        let p = self.params.clone();
        let (_, diags) = self.time_fractions.as_ref().expect("computed");
        let median = |f: &dyn Fn(&Diagnostics) -> f64, i: usize| {
            let mut xs: Vec<f64> = diags.iter().map(|d| f(&d[i])).collect();
            xs.sort_by(f64::total_cmp);
            let m = xs.len();
            if m % 2 == 1 {
                xs[m / 2]
            } else {
                0.5 * (xs[m / 2 - 1] + xs[m / 2])
            }
        };
        let mut reports = Vec::new();
        type Pick = fn(&Diagnostics) -> f64;
        let series: [(&str, Pick, bool); 3] = [
            ("max|S-Shat|/sqrt(n)", |d| d.ladder_gap, true),
            ("sup|t(m)-7m/3|/n", |d| d.time_change_gap, true),
            ("occupation gap", |d| d.occupation_gap, false),
        ];
        for (name, pick, trend) in series {
            let medians: Vec<f64> = (0..p.diag_ns.len()).map(|i| median(&pick, i)).collect();
            for (n, m) in p.diag_ns.iter().zip(&medians) {
                reports.push(StatReport::new(format!("median {name}, n={n}"), *m, Criterion::Informational).samples(diags.len() as u64));
            }
            if trend {
                let bad = medians.windows(2).filter(|w| w[1] >= w[0]).count();
                let r = StatReport::new(format!("non-decreasing steps in median {name}"), bad as f64, Criterion::AtMost(0.0))
                    .samples(diags.len() as u64);
                reports.push(report_seeds(r, &self.cfg, 7, diags.len() as u64));
            }
        }
        let last = median(&|d: &Diagnostics| d.time_change_gap, p.diag_ns.len() - 1);
        reports.push(
            StatReport::new(format!("median sup|t(m)-7m/3|/n at n={}", p.diag_ns.last().unwrap()), last, Criterion::Below(p.diag_time_max))
                .samples(diags.len() as u64),
        );
        reports
    }
}

/// Steps a walk with the extrema index and checks every allowed set against
/// a full scan. Returns mismatches and steps with too few directions.
fn index_run_2d<R: Rng + ?Sized>(variant: Variant, n: u64, rng: &mut R) -> (u64, u64) {
    let mut w = WalkState::new(variant, false);
    let mut naive = NaiveOccupancy::new();
    naive.insert(Site::ORIGIN);
    let minimum = if variant == Variant::Prudent { 2 } else { 1 };
    let (mut mismatches, mut weak) = (0, 0);
    for _ in 0..n {
        let at = w.position();
        let mut expected = naive.free_directions(at);
        if variant.has_obstacle() {
            expected = crate::lattice::DirSet::of(&expected.iter().filter(|&d| !ray_meets_quadrant(at, d)).collect::<Vec<_>>());
        }
        let got = w.allowed_directions();
        mismatches += (got != expected) as u64;
        weak += (got.len() < minimum) as u64;
        debug_assert!(!variant.has_obstacle() || obstacle_free(at).bits() & got.bits() == got.bits());
        if got.is_empty() {
            break;
        }
        w.step(rng);
        naive.insert(w.position());
    }
    (mismatches, weak)
}

fn index_run_3d<R: Rng + ?Sized>(n: u64, rng: &mut R) -> (u64, u64) {
    let mut w = Walk3State::new(true);
    let mut mismatches = 0;
    for _ in 0..n {
        let expected = naive_allowed_directions_3d(w.sites().expect("recording"), w.position());
        mismatches += (w.allowed_directions() != expected) as u64;
        if w.step(rng).is_none() {
            break;
        }
    }
    (mismatches, w.few_direction_events())
}

/// Steps after which a crossing replica is abandoned. Exit times have heavy
/// tails, so rare replicas run far longer than the rest.
const CROSSING_STEP_CAP: u64 = 50_000_000;

/// `A_k` for each `k = 0..=k_max` whose horizontal excursion finished within
/// `cap` steps, on one prudent walk started with `+e1`.
fn crossing_flags<R: Rng + ?Sized>(k_max: usize, cap: u64, rng: &mut R) -> Vec<bool> {
    let mut w = WalkState::new(Variant::Prudent, false);
    let mut tracker = ExcursionTracker::new(Variant::Prudent);
    w.apply(Dir::Right);
    tracker.push(w.position());
    let mut flags = Vec::with_capacity(k_max + 1);
    let mut current = false;
    while w.steps() < cap {
        w.step(rng);
        if let Some(rec) = tracker.push(w.position()) {
            current |= rec.crossed;
            if rec.kind == ExcursionKind::Horizontal {
                flags.push(current);
                current = false;
                if rec.k == k_max {
                    break;
                }
            }
        }
    }
    flags
}
