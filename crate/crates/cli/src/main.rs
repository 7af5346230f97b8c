use anyhow::Context;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use vbqc_cli::{emit, load_config, run, Overrides};

/// Worker threads for round execution; defaults to all cores.
const THREADS_ENV: &str = "VBQC_THREADS";

#[derive(Parser)]
#[command(name = "vbqc", version, about = "Simulate and verify two-client blind quantum computation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run. Exit status: 0 accept, 2 abort, 1 error.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        rounds: Option<u64>,
        #[arg(long)]
        omega: Option<f64>,
        /// Server strategy, e.g. `fixed-outcome:q2=0` or `angle-tamper:q2=4`.
        #[arg(long)]
        adversary: Option<String>,
        /// Also compute the blindness report.
        #[arg(long)]
        blindness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .with_context(|| format!("{THREADS_ENV}={v} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot start the thread pool")?;
    }
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    let Command::Run {
        config,
        seed,
        rounds,
        omega,
        adversary,
        blindness,
        out,
    } = cli.command;
    let overrides = Overrides {
        seed,
        rounds,
        omega,
        adversary,
        blindness,
        out,
    };
    let cfg = overrides.apply(load_config(&config)?)?;
    let report = run(&cfg, &overrides)?;
    let files = emit(&report, &cfg.output_dir)?;

    let s = &report.summary;
    println!(
        "{}: epsilon = {:.4} ({} of {} tests failed), omega = {}",
        s.verdict.to_uppercase(),
        s.epsilon,
        s.failed_tests,
        s.n_test,
        s.omega
    );
    if let (Some(out), Some(frac)) = (s.output, s.majority_fraction) {
        println!("output = {out} (majority {:.4} of {} computation rounds)", frac, s.n_comp);
    }
    if let Some(b) = &report.blindness {
        println!("blindness: F_1q = {:.6}, F_2q = {:.6}, chi = {:.3e} bits", b.f_1q, b.f_2q, b.chi);
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(report.accepted())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
