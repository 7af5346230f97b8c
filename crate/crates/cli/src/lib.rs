//! Orchestration behind the `vbqc` binary: load a run configuration, execute
//! the protocol, decide, optionally certify blindness, and write reports.

pub mod config;

use serde::Serialize;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

use vbqc::blindness::{blindness_report, twirl_states, BlindnessReport};
use vbqc::devices::noisy_source_state;
use vbqc::protocol::{run_protocol, RoundType, Transcript};
use vbqc::verify::{robustness_bound, soundness_bound};
use vbqc::{decide, Verdict};

pub use config::{load_config, parse_config, ConfigError, Overrides, RunConfig};

pub const BOUND_DISCLAIMER: &str = "generic Hoeffding bounds exp(-2 n_test gap^2); \
they are not the protocol's composable security or robustness errors";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Simulation(#[from] vbqc::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("cannot serialize {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// Accept/abort outcome with the bound values, as written to the summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictSummary {
    pub verdict: &'static str,
    pub output: Option<u8>,
    pub epsilon: f64,
    pub omega: f64,
    pub sigma: f64,
    pub nu: f64,
    pub n: usize,
    pub n_test: usize,
    pub n_comp: usize,
    pub failed_tests: usize,
    pub majority_fraction: Option<f64>,
    /// `None` when `nu == omega`, where the bound is undefined.
    pub robustness_bound: Option<f64>,
    pub soundness_bound: f64,
    pub bound_disclaimer: &'static str,
}

/// Counts of `(m1_true, m2_true)` per round type, indexed `[m1][m2]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub test: [[u64; 2]; 2],
    pub computation: [[u64; 2]; 2],
}

impl Histogram {
    pub fn from_transcript(t: &Transcript) -> Self {
        let mut h = Histogram::default();
        for r in &t.rounds {
            let grid = match r.round_type {
                RoundType::Test => &mut h.test,
                RoundType::Computation => &mut h.computation,
            };
            grid[r.m1_true as usize][r.m2_true as usize] += 1;
        }
        h
    }

    pub fn total(grid: &[[u64; 2]; 2]) -> u64 {
        grid.iter().flatten().sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub summary: VerdictSummary,
    pub histogram: Histogram,
    pub blindness: Option<BlindnessReport>,
    pub config: RunConfig,
    pub overrides: Overrides,
    pub wall_clock_s: f64,
    #[serde(skip)]
    pub transcript: Transcript,
}

impl RunReport {
    pub fn accepted(&self) -> bool {
        self.summary.verdict == "accept"
    }
}

fn summarize(verdict: &Verdict, cfg: &RunConfig) -> Result<VerdictSummary, vbqc::Error> {
    let th = &cfg.thresholds;
    let s = verdict.stats();
    let n_test = s.n_test as u64;
    let robustness = if th.omega > th.nu {
        Some(robustness_bound(n_test, th.omega, th.nu)?)
    } else {
        None
    };
    Ok(VerdictSummary {
        verdict: if verdict.is_accept() { "accept" } else { "abort" },
        output: verdict.output().map(u8::from),
        epsilon: s.epsilon,
        omega: th.omega,
        sigma: th.sigma,
        nu: th.nu,
        n: s.n,
        n_test: s.n_test,
        n_comp: s.n_comp,
        failed_tests: s.failed_tests,
        majority_fraction: s.majority_fraction,
        robustness_bound: robustness,
        soundness_bound: soundness_bound(n_test, th.sigma, th.omega)?,
        bound_disclaimer: BOUND_DISCLAIMER,
    })
}

/// Runs the protocol, the decision and, if configured, the blindness analysis.
pub fn run(cfg: &RunConfig, overrides: &Overrides) -> Result<RunReport, RunError> {
    let start = Instant::now();
    cfg.validate()?;
    let transcript = run_protocol(&cfg.protocol(), cfg.seed)?;
    let verdict = decide(&transcript, &cfg.thresholds)?;
    let blindness = match &cfg.blindness {
        Some(opts) => {
            let source = match cfg.adversary.source_override() {
                Some(s) => *s,
                None => noisy_source_state(&cfg.noise)?,
            };
            Some(blindness_report(&source, opts)?)
        }
        None => None,
    };
    Ok(RunReport {
        summary: summarize(&verdict, cfg)?,
        histogram: Histogram::from_transcript(&transcript),
        blindness,
        config: cfg.clone(),
        overrides: overrides.clone(),
        wall_clock_s: start.elapsed().as_secs_f64(),
        transcript,
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| RunError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(io_err(path))
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> RunError + '_ {
    move |source| RunError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `summary.json`, `rounds.jsonl`, `histogram.csv` and, with a
/// blindness report, `blindness.json` and `blindness_matrices.csv` into
/// `dir`. Returns the paths written.
pub fn emit(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();

    let path = dir.join("summary.json");
    write_json(&path, report)?;
    written.push(path);

    let path = dir.join("rounds.jsonl");
    let mut w = create(&path)?;
    for r in &report.transcript.rounds {
        serde_json::to_writer(&mut w, r).map_err(|source| RunError::Json {
            path: path.clone(),
            source,
        })?;
        w.write_all(b"\n").map_err(io_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;
    written.push(path);

    let path = dir.join("histogram.csv");
    write_histogram(&path, &report.histogram)?;
    written.push(path);

    if let Some(b) = &report.blindness {
        let path = dir.join("blindness.json");
        write_json(&path, b)?;
        written.push(path);
        let path = dir.join("blindness_matrices.csv");
        let source = match report.config.adversary.source_override() {
            Some(s) => *s,
            None => noisy_source_state(&report.config.noise)?,
        };
        write_matrices(&path, &source)?;
        written.push(path);
    }
    Ok(written)
}

fn write_histogram(path: &Path, h: &Histogram) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["round_type", "m1_true", "m2_true", "count", "probability"])
        .map_err(csv_err(path))?;
    for (name, grid) in [("test", &h.test), ("computation", &h.computation)] {
        let total = Histogram::total(grid).max(1) as f64;
        for (m1, row) in grid.iter().enumerate() {
            for (m2, &c) in row.iter().enumerate() {
                w.write_record([
                    name.to_string(),
                    m1.to_string(),
                    m2.to_string(),
                    c.to_string(),
                    (c as f64 / total).to_string(),
                ])
                .map_err(csv_err(path))?;
            }
        }
    }
    w.flush().map_err(io_err(path))
}

/// One row per `(theta_1^A, theta_2^B)`: the rotated 4x4 state, row-major,
/// real and imaginary parts interleaved.
fn write_matrices(path: &Path, source: &vbqc::DensityMatrix2Q) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = vec!["theta1_a".to_string(), "theta2_b".to_string()];
    for i in 0..4 {
        for j in 0..4 {
            header.push(format!("re_{i}{j}"));
            header.push(format!("im_{i}{j}"));
        }
    }
    w.write_record(&header).map_err(csv_err(path))?;
    for (a, b, rho) in twirl_states(source) {
        let m = rho.matrix();
        let mut row = vec![a.to_string(), b.to_string()];
        for i in 0..4 {
            for j in 0..4 {
                row.push(m[(i, j)].re.to_string());
                row.push(m[(i, j)].im.to_string());
            }
        }
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}
