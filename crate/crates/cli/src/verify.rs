use std::fs;
use std::time::Instant;

use prudent_walk::acceptance::{Scale, Suite, SuiteConfig, SuiteReport, CRITERIA, SUPPLEMENTARY};
use prudent_walk::effective::law::PerturbedLaw;
use prudent_walk::stats::{render_table, StatReport, Verdict};

use crate::config::RunConfig;
use crate::Failure;

pub fn run(cfg: &RunConfig, criteria: Option<Vec<u8>>, tamper: Option<f64>) -> Result<(), Failure> {
    let scale = if cfg.quick { Scale::Quick } else { Scale::Full };
    let known: Vec<u8> = CRITERIA.iter().chain(&SUPPLEMENTARY).map(|c| c.0).collect();
    let ids = criteria.unwrap_or_else(|| known.clone());
    if let Some(bad) = ids.iter().find(|id| !known.contains(id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    if let Some(p) = tamper {
        if !(0.0..1.0).contains(&p) {
            return Err(Failure::Usage("tamper probability must lie in [0, 1)".into()));
        }
    }
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Usage(format!("{}: {e}", cfg.out.display())))?;
    let suite_cfg = SuiteConfig { scale, master_seed: cfg.seed, tamper: tamper.map(|continue_prob| PerturbedLaw { continue_prob }) };
    let mut suite = Suite::new(suite_cfg);
    let mut outcomes = Vec::new();
    for id in ids {
        let start = Instant::now();
        let outcome = suite.run(id);
        println!(
            "{:<3} {:<22} {}  {:>7.1}s",
            outcome.label(),
            outcome.title,
            if outcome.passed() { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        outcomes.push(outcome);
    }
    let report = SuiteReport { scale, master_seed: cfg.seed, criteria: outcomes };
    let all: Vec<StatReport> = report.reports().cloned().collect();
    let table = render_table(&all);
    fs::write(cfg.out.join("report.json"), serde_json::to_string_pretty(&report).expect("plain data") + "\n")?;
    fs::write(cfg.out.join("report.txt"), &table)?;
    print!("{table}");
    let failed = all.iter().filter(|r| r.verdict == Verdict::Fail).count();
    if failed == 0 {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} check(s) failed")))
    }
}
