//! `prudent`: simulations, the verification suite, plots and benchmarks.

mod bench;
mod config;
mod plot;
mod simulate;
mod svg;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_count, Command, FirstStepArg, Model, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "prudent", version, about = "Kinetic prudent walk simulations and checks")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Master seed; replica r uses mix(seed, r).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_parser = parse_count)]
    replicas: Option<u64>,
    /// Worker threads (0: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Smaller samples and looser tolerances.
    #[arg(long, global = true)]
    quick: bool,
    /// Also write SVG renderings.
    #[arg(long, global = true)]
    svg: bool,
    /// A `key = value` config file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Simulate replicas and write trajectories and a summary.
    Simulate {
        #[arg(long, value_enum)]
        variant: Option<Model>,
        /// Steps per replica (quadrature steps per unit time for zprocess).
        #[arg(long, value_parser = parse_count)]
        n: Option<u64>,
        #[arg(long, value_enum)]
        first_step: Option<FirstStepArg>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        checkpoints: Option<Vec<u64>>,
    },
    /// Run the acceptance suite; exits 1 if any check fails.
    Verify {
        /// Only these criteria (ids 1..=14).
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
        /// Replace the increment law by a perturbed one (self-check hook).
        #[arg(long, hide = true)]
        tamper: Option<f64>,
    },
    /// Turn simulation output into plot-ready CSV (and SVG with --svg).
    Plot {
        #[arg(long, value_enum)]
        kind: plot::PlotKind,
        /// Which record of a trajectory file to draw.
        #[arg(long, default_value_t = 0)]
        replica: usize,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Indexed vs full-scan stepper throughput.
    Bench {
        #[arg(long, value_parser = parse_count)]
        max_n: Option<u64>,
    },
}

/// Failures of a command, by exit code.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and failed (exit 1).
    Check(String),
    /// Bad arguments, config or input files (exit 2).
    Usage(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let command = match cli.command {
        Sub::Simulate { .. } => Command::Simulate,
        Sub::Verify { .. } => Command::Verify,
        Sub::Plot { .. } => Command::Plot,
        Sub::Bench { .. } => Command::Bench,
    };
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::new(command),
    };
    cfg.command = command;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(r) = cli.replicas {
        cfg.replicas = r;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    cfg.quick |= cli.quick;
    cfg.svg |= cli.svg;
    if let Sub::Simulate { variant, n, first_step, checkpoints } = &cli.command {
        if let Some(v) = variant {
            cfg.variant = *v;
        }
        if let Some(n) = n {
            cfg.n = *n;
        }
        if let Some(f) = first_step {
            cfg.first_step = *f;
        }
        if let Some(c) = checkpoints {
            cfg.checkpoints = c.clone();
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Sub::Simulate { .. } => simulate::run(&cfg),
        Sub::Verify { criteria, tamper } => verify::run(&cfg, criteria, tamper),
        Sub::Plot { kind, replica, inputs } => plot::run(&cfg, kind, replica, &inputs),
        Sub::Bench { max_n } => bench::run(&cfg, max_n.unwrap_or(1_000_000)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
