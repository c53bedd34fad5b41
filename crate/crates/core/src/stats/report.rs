use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

/// The rule that turns a statistic into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Criterion {
    Below(f64),
    AtMost(f64),
    Above(f64),
    AtLeast(f64),
    Within(f64, f64),
    Informational,
}

impl Criterion {
    pub fn judge(self, statistic: f64) -> Verdict {
        let ok = match self {
            Criterion::Below(t) => statistic < t,
            Criterion::AtMost(t) => statistic <= t,
            Criterion::Above(t) => statistic > t,
            Criterion::AtLeast(t) => statistic >= t,
            Criterion::Within(lo, hi) => (lo..=hi).contains(&statistic),
            Criterion::Informational => return Verdict::Informational,
        };
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn describe(self) -> String {
        match self {
            Criterion::Below(t) => format!("< {t}"),
            Criterion::AtMost(t) => format!("<= {t}"),
            Criterion::Above(t) => format!("> {t}"),
            Criterion::AtLeast(t) => format!(">= {t}"),
            Criterion::Within(lo, hi) => format!("in [{lo}, {hi}]"),
            Criterion::Informational => "info".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub name: String,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub statistic: f64,
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub sample_size: u64,
    /// Master seed and number of replica seeds drawn from it.
    pub master_seed: u64,
    pub seeds: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl StatReport {
    pub fn new(name: impl Into<String>, statistic: f64, criterion: Criterion) -> Self {
        StatReport {
            name: name.into(),
            estimate: None,
            stderr: None,
            statistic,
            criterion,
            verdict: criterion.judge(statistic),
            sample_size: 0,
            master_seed: 0,
            seeds: 0,
            note: String::new(),
        }
    }

    pub fn estimate(mut self, estimate: f64, stderr: Option<f64>) -> Self {
        self.estimate = Some(estimate);
        self.stderr = stderr;
        self
    }

    pub fn samples(mut self, sample_size: u64) -> Self {
        self.sample_size = sample_size;
        self
    }

    pub fn seeds(mut self, master_seed: u64, seeds: u64) -> Self {
        self.master_seed = master_seed;
        self.seeds = seeds;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// A failing report cannot be informational.
    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

/// Fixed-width text table of reports.
pub fn render_table(reports: &[StatReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>12}  {:>10}  {:>12}  {:<18}  {:<13}  {:>9}",
        "name", "estimate", "stderr", "statistic", "criterion", "verdict", "n"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>10}  {:>12.6}  {:<18}  {:<13}  {:>9}",
            r.name,
            opt(r.estimate),
            opt(r.stderr),
            r.statistic,
            r.criterion.describe(),
            format!("{:?}", r.verdict),
            r.sample_size
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(Criterion::Below(1.0).judge(0.5), Verdict::Pass);
        assert_eq!(Criterion::Below(1.0).judge(1.0), Verdict::Fail);
        assert_eq!(Criterion::Within(0.66, 0.85).judge(0.75), Verdict::Pass);
        assert_eq!(Criterion::Within(0.66, 0.85).judge(0.9), Verdict::Fail);
        assert_eq!(Criterion::Informational.judge(1e9), Verdict::Informational);
    }

    #[test]
    fn json_round_trip() {
        let r = StatReport::new("speed", 0.43, Criterion::Within(0.4086, 0.4486)).estimate(0.43, Some(0.001)).samples(200).seeds(1, 200);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<StatReport>(&json).unwrap(), r);
        let table = render_table(&[r]);
        assert!(table.lines().nth(1).unwrap().contains("Pass"));
    }
}
