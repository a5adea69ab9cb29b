use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;
use semitensor_cli::{emit_report, run_benchmark, BenchConfig, Benchmark, Format, WORKERS_ENV};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Run a semitensor benchmark and write its report.
#[derive(Debug, Parser)]
#[command(name = "semitensor", version)]
struct Args {
    #[arg(long, value_enum)]
    bench: Benchmark,
    /// Matrix size (spmm), virtual orbitals (mp3) or vertices (apsp).
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Dense operand columns for spmm [default: n/8].
    #[arg(long)]
    k: Option<usize>,
    /// Occupied orbitals for mp3 [default: n/2].
    #[arg(long)]
    m: Option<usize>,
    /// Nonzero fraction, or edge probability for apsp.
    #[arg(long, default_value_t = 0.01)]
    density: f64,
    /// Virtual processes.
    #[arg(long, default_value_t = 1)]
    procs: usize,
    /// Words of memory per process, or `inf`.
    #[arg(long, default_value_t = f64::INFINITY)]
    memory: f64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of consecutive seeds starting at --seed.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Timed repetitions per seed; the median is reported.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    verify: Switch,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Matrix Market graph for apsp.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn configure_workers() -> Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value
        .parse()
        .with_context(|| format!("{WORKERS_ENV}={value} is not a worker count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .context("configuring the worker pool")
}

fn main() -> Result<()> {
    let args = Args::parse();
    configure_workers()?;
    let config = BenchConfig {
        benchmark: args.bench,
        n: args.n,
        k: args.k,
        m: args.m,
        density: args.density,
        procs: args.procs,
        memory: args.memory.is_finite().then_some(args.memory),
        seeds: (args.seed..args.seed.saturating_add(args.seeds)).collect(),
        reps: args.reps,
        verify: args.verify == Switch::On,
        input: args.input,
    };
    let reports = run_benchmark(&config)?;
    emit_report(&reports, args.format, args.out.as_deref())
}
