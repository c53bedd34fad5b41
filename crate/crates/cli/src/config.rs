//! Run configuration and its flat `key = value` file form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Simulate,
    Verify,
    Plot,
    Bench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Prudent2d,
    Corner,
    Walk3d,
    Effective,
    Zprocess,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FirstStepArg {
    /// Uniform over the allowed directions.
    Natural,
    /// Always `+e1`.
    Right,
}

macro_rules! value_enum_text {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let v = self.to_possible_value().expect("no skipped variants");
                f.write_str(v.get_name())
            }
        }

        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, false)
            }
        }
    )*};
}

value_enum_text!(Command, Model, FirstStepArg);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub variant: Model,
    pub n: u64,
    pub replicas: u64,
    pub seed: u64,
    pub out: PathBuf,
    /// Times at which norm series or limit-process samples are taken; empty
    /// means the command's default grid.
    pub checkpoints: Vec<u64>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub quick: bool,
    pub svg: bool,
    pub first_step: FirstStepArg,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            variant: Model::Prudent2d,
            n: 10_000,
            replicas: 1,
            seed: 1,
            out: PathBuf::from("prudent-out"),
            checkpoints: Vec::new(),
            threads: 0,
            quick: false,
            svg: false,
            first_step: FirstStepArg::Natural,
        }
    }

    pub fn to_file_string(&self) -> String {
        let checkpoints = self.checkpoints.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        format!(
            "command = {}\nvariant = {}\nn = {}\nreplicas = {}\nseed = {}\nout = {}\ncheckpoints = {}\nthreads = {}\nquick = {}\nsvg = {}\nfirst_step = {}\n",
            self.command,
            self.variant,
            self.n,
            self.replicas,
            self.seed,
            self.out.display(),
            checkpoints,
            self.threads,
            self.quick,
            self.svg,
            self.first_step
        )
    }

    /// Parses a config file. Missing keys keep their defaults; `#` starts a
    /// comment line.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = RunConfig::new(Command::Simulate);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| format!("line {}: {reason}", i + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| err(format!("bad {what} {value:?}"));
            match key {
                "command" => cfg.command = value.parse().map_err(|_| bad("command"))?,
                "variant" => cfg.variant = value.parse().map_err(|_| bad("variant"))?,
                "n" => cfg.n = parse_count(value).map_err(|_| bad("n"))?,
                "replicas" => cfg.replicas = parse_count(value).map_err(|_| bad("replicas"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                "out" => cfg.out = PathBuf::from(value),
                "checkpoints" => {
                    cfg.checkpoints = if value.is_empty() {
                        Vec::new()
                    } else {
                        value.split(',').map(|v| parse_count(v.trim())).collect::<Result<_, _>>().map_err(|_| bad("checkpoints"))?
                    }
                }
                "threads" => cfg.threads = value.parse().map_err(|_| bad("threads"))?,
                "quick" => cfg.quick = value.parse().map_err(|_| bad("quick"))?,
                "svg" => cfg.svg = value.parse().map_err(|_| bad("svg"))?,
                "first_step" => cfg.first_step = value.parse().map_err(|_| bad("first_step"))?,
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(cfg)
    }
}

/// A count written as an integer or in exponent form (`6e6`, `1e+5`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 {
        Ok(f as u64)
    } else {
        Err(format!("not a count: {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            command: Command::Bench,
            variant: Model::Walk3d,
            n: 6_000_000,
            replicas: 8,
            seed: 42,
            out: PathBuf::from("/tmp/some dir/out"),
            checkpoints: vec![10, 100, 1000],
            threads: 3,
            quick: true,
            svg: true,
            first_step: FirstStepArg::Right,
        };
        assert_eq!(RunConfig::parse(&cfg.to_file_string()).unwrap(), cfg);
        let default = RunConfig::new(Command::Simulate);
        assert_eq!(RunConfig::parse(&default.to_file_string()).unwrap(), default);
    }

    #[test]
    fn comments_defaults_and_errors() {
        let cfg = RunConfig::parse("# a run\n\nvariant = corner\nn = 1e5\n").unwrap();
        assert_eq!(cfg.variant, Model::Corner);
        assert_eq!(cfg.n, 100_000);
        assert_eq!(cfg.replicas, 1);
        assert!(RunConfig::parse("variant = hexagonal").unwrap_err().starts_with("line 1"));
        assert!(RunConfig::parse("n = 5\ncolour = red").unwrap_err().starts_with("line 2"));
        assert!(RunConfig::parse("just words").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("6e6"), Ok(6_000_000));
        assert_eq!(parse_count("12"), Ok(12));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }
}
