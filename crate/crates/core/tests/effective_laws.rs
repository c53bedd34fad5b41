use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use prudent_walk::effective::{
    exit_time, exit_time_pmf_f64, hat_path, hat_to_corner_path, parse_pmf_table, pmf_table, simulate_effective_walk,
    ExitResult, Width,
};
use prudent_walk::lattice::Axis;
use prudent_walk::limit::diffusive_embedding;
use prudent_walk::rng::seeded;
use prudent_walk::stats::{chi_square, loglog_slope, pool_tail};
use prudent_walk::walk2d::corner_path_to_hat;

const GOLDEN: &str = include_str!("data/exit_pmf.txt");

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// P(η_L = m) by summing over all paths that stay in [0, L) for m − 1 steps
/// and then leave. Leaving from v has probability 1 − Σ_{w in [0,L)} p(w − v).
fn exit_pmf_by_paths(width: i64, m: usize) -> BigRational {
    let p = |k: i64| r(1, 3) * r(1, 1 << k.unsigned_abs());
    let stay = |v: i64| (0..width).map(|w| p(w - v)).fold(BigRational::zero(), |a, b| a + b);
    // mass[v] = P(S_j = v, still inside) after j steps
    let mut mass: Vec<BigRational> = (0..width).map(|v| if v == 0 { BigRational::one() } else { BigRational::zero() }).collect();
    for _ in 1..m {
        mass = (0..width)
            .map(|w| (0..width).map(|v| &mass[v as usize] * p(w - v)).fold(BigRational::zero(), |a, b| a + b))
            .collect();
    }
    (0..width).map(|v| &mass[v as usize] * (BigRational::one() - stay(v))).fold(BigRational::zero(), |a, b| a + b)
}

#[test]
fn golden_table_matches_path_sums_and_library() {
    let rows = parse_pmf_table(GOLDEN).unwrap();
    assert_eq!(rows.len(), 48);
    for row in &rows {
        assert_eq!(row.probability, exit_pmf_by_paths(row.width as i64, row.time as usize), "L={} m={}", row.width, row.time);
    }
    let regenerated: String = [1, 2, 3, 5].iter().map(|&l| pmf_table(l, 12).unwrap()).collect();
    assert_eq!(regenerated, GOLDEN);
}

#[test]
fn width_one_closed_form() {
    let rows = parse_pmf_table(GOLDEN).unwrap();
    for row in rows.iter().filter(|r| r.width == 1) {
        let expected = r(2, 3) * BigRational::new(BigInt::one(), BigInt::from(3).pow(row.time as u32 - 1));
        assert_eq!(row.probability, expected);
    }
}

#[test]
fn exit_law_at_a_million_samples() {
    let n = 1_000_000usize;
    for (i, width) in [1u64, 2, 3, 5, 10].into_iter().enumerate() {
        let mut rng = seeded(1000 + i as u64);
        let probs = exit_time_pmf_f64(width, 50).unwrap();
        let mut counts = vec![0u64; probs.len() + 1];
        for _ in 0..n {
            let m = exit_time(Width::Finite(width), None, &mut rng).unwrap().exited().unwrap().exit_time as usize;
            counts[(m - 1).min(probs.len())] += 1;
        }
        let (obs, exp) = pool_tail(&counts, &probs, n as u64);
        let test = chi_square(&obs, &exp).unwrap();
        assert!(test.p_value > 0.01, "L={width}: {test:?}");
    }
}

#[test]
fn survival_decays_like_inverse_square_root() {
    let cap = 10_000u64;
    let samples = 100_000;
    let mut rng = seeded(77);
    let times: Vec<u64> = (0..samples)
        .map(|_| match exit_time(Width::Infinite, Some(cap), &mut rng).unwrap() {
            ExitResult::Exited(o) => o.exit_time,
            ExitResult::Censored { steps, .. } => steps + 1,
        })
        .collect();
    let points: Vec<(f64, f64)> = [100u64, 200, 500, 1000, 2000, 5000, 10_000]
        .iter()
        .map(|&t| (t as f64, times.iter().filter(|&&x| x >= t).count() as f64 / samples as f64))
        .collect();
    let fit = loglog_slope(&points).unwrap();
    assert!((-0.6..=-0.4).contains(&fit.slope), "{fit:?}");
}

#[test]
fn hat_embedding_round_trips_on_random_paths() {
    for seed in 0..1000 {
        let path = simulate_effective_walk(200, &mut seeded(seed));
        let hat = hat_path(&path);
        let axis = if seed % 2 == 0 { Axis::Horizontal } else { Axis::Vertical };
        let emb = hat_to_corner_path(&hat, axis);
        let back = corner_path_to_hat(&emb.path).unwrap();
        let e = hat.last_ladder_time();
        assert_eq!(back.values(), &hat.values()[..=e], "seed {seed}");
        if emb.excursions > 0 {
            assert_eq!(emb.path.len() as u64, hat.clock()[e] - emb.excursions as u64 + 1);
        }
    }
}

#[test]
fn occupation_counts_track_a_matched_embedding() {
    let n = 1_000_000;
    let seeds = 20;
    let close = (0..seeds)
        .filter(|&seed| {
            let p = simulate_effective_walk(n, &mut seeded(500 + seed));
            let hat = hat_path(&p);
            let b = diffusive_embedding(&p).unwrap();
            let (mut g, mut z, mut gap) = (0i64, 0i64, 0i64);
            for (h, w) in hat.values().iter().zip(b.values()) {
                g += (*h >= 0) as i64;
                z += (*w >= 0.0) as i64;
                gap = gap.max((g - z).abs());
            }
            (gap as f64 / n as f64) < 0.05
        })
        .count();
    assert!(close * 10 >= seeds as usize * 9, "{close}/{seeds}");
}
