//! Benchmark drivers behind the `semitensor` binary.
//!
//! Each benchmark runs once per seed and yields a [`BenchReport`]. Reports
//! are rendered as a JSON array or as CSV with one row per seed.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rand::Rng;
use semitensor::apps::{
    apsp_dense_doubling, apsp_tiskin, floyd_warshall_oracle, mp3_energy, random_digraph, Mp3Inputs,
};
use semitensor::einsum::{execute_reference, ContractionReport};
use semitensor::tensor::io::read_matrix_market;
use semitensor::{
    standard_ring, tropical_i32, Engine, Expr, Layout, Tensor, Update, VirtualWorld,
};
use serde::{Deserialize, Serialize};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "SEMITENSOR_WORKERS";

/// Largest sparse-times-dense size checked against the reference executor.
pub const SPMM_VERIFY_LIMIT: usize = 512;
/// Largest graph checked against dense doubling and Floyd-Warshall.
pub const APSP_VERIFY_LIMIT: usize = 64;
pub const SPMM_TOLERANCE: f64 = 1e-12;
pub const MP3_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Spmm,
    Mp3,
    Apsp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub benchmark: Benchmark,
    /// Matrix size for spmm, vertex count for apsp, virtual orbitals for mp3.
    pub n: usize,
    /// Columns of the dense operand in spmm; defaults to `n / 8`.
    pub k: Option<usize>,
    /// Occupied orbitals for mp3; defaults to `n / 2`.
    pub m: Option<usize>,
    /// Nonzero fraction of the sparse operand, or edge probability for apsp.
    pub density: f64,
    pub procs: usize,
    /// Words of memory per process; `None` means unbounded.
    pub memory: Option<f64>,
    pub seeds: Vec<u64>,
    pub reps: usize,
    pub verify: bool,
    /// Matrix Market graph for apsp instead of a generated one.
    pub input: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(benchmark: Benchmark, n: usize) -> Self {
        BenchConfig {
            benchmark,
            n,
            k: None,
            m: None,
            density: 0.01,
            procs: 1,
            memory: None,
            seeds: vec![0],
            reps: 10,
            verify: true,
            input: None,
        }
    }

    pub fn spmm_columns(&self) -> usize {
        self.k.unwrap_or(self.n / 8).max(1)
    }

    pub fn occupied(&self) -> usize {
        self.m.unwrap_or(self.n / 2).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(!self.seeds.is_empty(), "no seeds to run");
        ensure!(self.n > 0, "n must be positive");
        ensure!(self.procs > 0, "procs must be positive");
        ensure!(self.reps > 0, "reps must be positive");
        ensure!(
            (0.0..=1.0).contains(&self.density),
            "density {} is outside [0, 1]",
            self.density
        );
        if let Some(m) = self.memory {
            ensure!(m > 0.0, "memory must be positive");
        }
        if self.input.is_some() && self.benchmark != Benchmark::Apsp {
            bail!("--input is only used by the apsp benchmark");
        }
        Ok(())
    }
}

/// Wall-clock seconds over the repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub reps: usize,
}

impl Timing {
    fn of(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        let len = samples.len();
        let median = if len % 2 == 1 {
            samples[len / 2]
        } else {
            (samples[len / 2 - 1] + samples[len / 2]) / 2.0
        };
        Timing {
            median,
            min: samples[0],
            max: samples[len - 1],
            reps: len,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub seed: u64,
    pub timing: Timing,
    /// Stored entries of the sparse input.
    pub nnz: usize,
    /// `Some(true)` once the oracle agreed, `None` when no check ran.
    pub verified: Option<bool>,
    /// Contractions issued by one repetition, in order.
    pub contractions: Vec<ContractionReport>,
    /// Correlation energy, mp3 only.
    pub energy: Option<f64>,
    /// Stored entries of the hop-bounded matrix per iteration, apsp only.
    pub hop_nnz: Option<Vec<usize>>,
}

impl BenchReport {
    /// The contraction with the largest measured per-process traffic.
    pub fn heaviest(&self) -> Option<&ContractionReport> {
        self.contractions
            .iter()
            .rev()
            .max_by_key(|c| c.sim.max_words)
    }
}

fn engine(cfg: &BenchConfig) -> Result<Engine> {
    Ok(Engine::new(VirtualWorld::new(cfg.procs)?).with_memory(cfg.memory))
}

/// Run `body` `reps` times with a fresh engine, keeping the contraction
/// reports and result of the first run.
fn repeat<R>(
    cfg: &BenchConfig,
    mut body: impl FnMut(&mut Engine) -> Result<R>,
) -> Result<(Timing, Vec<ContractionReport>, R)> {
    let mut samples = Vec::with_capacity(cfg.reps);
    let mut first = None;
    for _ in 0..cfg.reps {
        let mut engine = engine(cfg)?;
        let start = Instant::now();
        let result = body(&mut engine)?;
        samples.push(start.elapsed().as_secs_f64());
        if first.is_none() {
            first = Some((engine.take_reports(), result));
        }
    }
    let (reports, result) = first.expect("reps is positive");
    Ok((Timing::of(samples), reports, result))
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Sparse `n × n` matrix times dense `n × k` matrix.
pub fn run_spmm(cfg: &BenchConfig, seed: u64) -> Result<BenchReport> {
    let (n, k) = (cfg.n, cfg.spmm_columns());
    let r = standard_ring();
    let mut a = Tensor::sparse(&[n, n], &r)?;
    a.fill_random(cfg.density, seed, |g| g.random_range(-1.0..1.0))?;
    let mut b = Tensor::dense(&[n, k], &r)?;
    b.fill_random(1.0, seed.wrapping_add(1), |g| g.random_range(-1.0..1.0))?;

    let (timing, contractions, c) = repeat(cfg, |engine| {
        let mut c = Tensor::dense(&[n, k], &r)?;
        engine.assign(&mut c, "ij", Expr::mul(&a, "ik", &b, "kj")?)?;
        Ok(c)
    })?;

    let verified = if cfg.verify && n <= SPMM_VERIFY_LIMIT {
        let mut expected = Tensor::dense(&[n, k], &r)?;
        execute_reference(&mut expected, "ij", Update::Assign, &Expr::mul(&a, "ik", &b, "kj")?)?;
        let (got, want) = (c.to_values()?, expected.to_values()?);
        if let Some(i) = (0..got.len()).find(|&i| relative_gap(got[i], want[i]) > SPMM_TOLERANCE) {
            bail!(
                "spmm seed {seed}: entry {:?} is {} but the reference gives {}",
                c.delinearize(i),
                got[i],
                want[i]
            );
        }
        Some(true)
    } else {
        None
    };

    Ok(BenchReport {
        config: cfg.clone(),
        seed,
        timing,
        nnz: a.nnz(),
        verified,
        contractions,
        energy: None,
        hop_nnz: None,
    })
}

/// Third-order perturbation energy on `m` occupied and `n` virtual orbitals.
pub fn run_mp3(cfg: &BenchConfig, seed: u64) -> Result<BenchReport> {
    let inputs = Mp3Inputs::random(cfg.occupied(), cfg.n, cfg.density, seed, Layout::Sparse)?;
    let (timing, contractions, energy) = repeat(cfg, |engine| Ok(mp3_energy(engine, &inputs)?))?;

    let verified = if cfg.verify {
        let dense = inputs.with_layout(Layout::Dense)?;
        let expected = mp3_energy(&mut Engine::local(), &dense)?;
        if relative_gap(energy, expected) > MP3_TOLERANCE {
            bail!("mp3 seed {seed}: sparse energy {energy} differs from dense energy {expected}");
        }
        Some(true)
    } else {
        None
    };

    let nnz = [
        &inputs.vabij,
        &inputs.vijab,
        &inputs.vabcd,
        &inputs.vijkl,
        &inputs.vaibj,
    ]
    .iter()
    .map(|t| t.nnz())
    .sum();
    Ok(BenchReport {
        config: cfg.clone(),
        seed,
        timing,
        nnz,
        verified,
        contractions,
        energy: Some(energy),
        hop_nnz: None,
    })
}

fn load_graph(path: &Path) -> Result<Tensor<i32>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut a = read_matrix_market(BufReader::new(file), &tropical_i32())
        .with_context(|| format!("reading {}", path.display()))?;
    let dims = a.dims().to_vec();
    ensure!(dims[0] == dims[1], "graph matrix is {}x{}, not square", dims[0], dims[1]);
    let diagonal: Vec<(usize, i32)> = (0..dims[0]).map(|i| (i * dims[0] + i, 0)).collect();
    a.write(&diagonal, false)?;
    Ok(a)
}

/// All-pairs shortest paths by hop-bounded sparse doubling.
pub fn run_apsp(cfg: &BenchConfig, seed: u64) -> Result<BenchReport> {
    let a = match &cfg.input {
        Some(path) => load_graph(path)?,
        None => {
            let n = cfg.n;
            let max_weight = i32::try_from(n * n).context("n² exceeds the weight range")?;
            random_digraph(n, cfg.density, max_weight, seed, Layout::Sparse)?
        }
    };
    let n = a.dims()[0];
    let (timing, contractions, outcome) = repeat(cfg, |engine| Ok(apsp_tiskin(engine, &a)?))?;

    let verified = if cfg.verify && n <= APSP_VERIFY_LIMIT {
        let oracle = floyd_warshall_oracle(&a)?.to_values()?;
        let mut dense = a.to_layout(Layout::Dense)?;
        apsp_dense_doubling(&mut Engine::local(), &mut dense, n)?;
        if outcome.distances.to_values()? != oracle {
            bail!("apsp seed {seed}: hop-bounded doubling differs from Floyd-Warshall");
        }
        if dense.to_values()? != oracle {
            bail!("apsp seed {seed}: dense doubling differs from Floyd-Warshall");
        }
        Some(true)
    } else {
        None
    };

    Ok(BenchReport {
        config: cfg.clone(),
        seed,
        timing,
        nnz: a.nnz(),
        verified,
        contractions,
        energy: None,
        hop_nnz: Some(outcome.hop_matrix_nnz),
    })
}

/// Run the configured benchmark once per seed.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchReport>> {
    cfg.validate()?;
    cfg.seeds
        .iter()
        .map(|&seed| match cfg.benchmark {
            Benchmark::Spmm => run_spmm(cfg, seed),
            Benchmark::Mp3 => run_mp3(cfg, seed),
            Benchmark::Apsp => run_apsp(cfg, seed),
        })
        .collect()
}

/// Columns of the CSV rendering, in order.
pub const CSV_COLUMNS: [&str; 26] = [
    "benchmark",
    "seed",
    "n",
    "k",
    "m",
    "density",
    "procs",
    "memory",
    "nnz",
    "contractions",
    "label",
    "shape_m",
    "shape_k",
    "shape_n",
    "shape_z",
    "grid",
    "predicted_w",
    "measured_words",
    "total_words",
    "balance_ratio",
    "sum_predicted_w",
    "sum_measured_words",
    "median_seconds",
    "min_seconds",
    "max_seconds",
    "verified",
];

#[derive(Serialize)]
struct CsvRow {
    benchmark: Benchmark,
    seed: u64,
    n: usize,
    k: Option<usize>,
    m: Option<usize>,
    density: f64,
    procs: usize,
    memory: Option<f64>,
    nnz: usize,
    contractions: usize,
    label: String,
    shape_m: Option<usize>,
    shape_k: Option<usize>,
    shape_n: Option<usize>,
    shape_z: Option<usize>,
    grid: String,
    predicted_w: Option<f64>,
    measured_words: Option<u64>,
    total_words: Option<u64>,
    balance_ratio: Option<f64>,
    sum_predicted_w: f64,
    sum_measured_words: u64,
    median_seconds: f64,
    min_seconds: f64,
    max_seconds: f64,
    verified: Option<bool>,
}

impl CsvRow {
    fn of(report: &BenchReport) -> Self {
        let cfg = &report.config;
        let heaviest = report.heaviest();
        let (k, m) = match cfg.benchmark {
            Benchmark::Spmm => (Some(cfg.spmm_columns()), None),
            Benchmark::Mp3 => (None, Some(cfg.occupied())),
            Benchmark::Apsp => (None, None),
        };
        CsvRow {
            benchmark: cfg.benchmark,
            seed: report.seed,
            n: cfg.n,
            k,
            m,
            density: cfg.density,
            procs: cfg.procs,
            memory: cfg.memory,
            nnz: report.nnz,
            contractions: report.contractions.len(),
            label: heaviest.map_or_else(String::new, |c| c.label.clone()),
            shape_m: heaviest.map(|c| c.shape.m),
            shape_k: heaviest.map(|c| c.shape.k),
            shape_n: heaviest.map(|c| c.shape.n),
            shape_z: heaviest.map(|c| c.shape.z),
            grid: heaviest.map_or_else(String::new, |c| {
                let [p1, p2, p3] = c.plan.grid();
                format!("{p1}x{p2}x{p3}")
            }),
            predicted_w: heaviest.map(|c| c.plan.cost.w_total),
            measured_words: heaviest.map(|c| c.sim.max_words),
            total_words: heaviest.map(|c| c.sim.total_words),
            balance_ratio: heaviest.map(|c| c.sim.balance_ratio),
            sum_predicted_w: report.contractions.iter().map(|c| c.plan.cost.w_total).sum(),
            sum_measured_words: report.contractions.iter().map(|c| c.sim.max_words).sum(),
            median_seconds: report.timing.median,
            min_seconds: report.timing.min,
            max_seconds: report.timing.max,
            verified: report.verified,
        }
    }
}

/// Render reports in the requested format.
pub fn render_report(reports: &[BenchReport], format: Format) -> Result<Vec<u8>> {
    ensure!(!reports.is_empty(), "no reports to write");
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(reports)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for report in reports {
                writer.serialize(CsvRow::of(report))?;
            }
            Ok(writer.into_inner()?)
        }
    }
}

/// Write reports to `out`, or to standard output when `out` is `None`.
/// Nothing is written when rendering fails.
pub fn emit_report(reports: &[BenchReport], format: Format, out: Option<&Path>) -> Result<()> {
    let bytes = render_report(reports, format)?;
    match out {
        Some(path) => {
            std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => Ok(std::io::stdout().lock().write_all(&bytes)?),
    }
}
