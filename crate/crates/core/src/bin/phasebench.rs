use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use homomorphic::bench::{self, BenchConfig};
use homomorphic::{Error, Method};

/// Phase unwrapping and homomorphic wavelet estimation benchmarks.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated list, e.g. `PU-M,PU-K`.
    #[arg(long, global = true)]
    methods: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    reps: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write synthetic traces and their wrapped / ideal phase.
    Synth,
    /// Unwrap a `time_s,amplitude` trace file.
    Unwrap { trace: Option<PathBuf> },
    /// Rotation and delay recovered by each method, plus timing.
    Table1,
    /// Estimate the wavelet of a synthetic gather.
    Estimate,
    /// Accuracy over record length and noise level.
    Sweep,
}

fn resolve(cli: &Cli) -> Result<BenchConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => BenchConfig::from_file(p)?,
        None => BenchConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(m) = &cli.methods {
        cfg.methods = Method::parse_list(m)?;
    }
    if let Some(o) = &cli.out {
        cfg.out_dir = o.clone();
    }
    if let Some(r) = cli.reps {
        cfg.reps = r;
    }
    if let Cmd::Unwrap { trace: Some(t) } = &cli.cmd {
        cfg.trace = Some(t.clone());
    }
    if matches!(cli.cmd, Cmd::Estimate) && cli.methods.is_none() && cli.config.is_none() {
        cfg.methods = vec![Method::WPlane];
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = resolve(cli)?;
    let written = match cli.cmd {
        Cmd::Synth => bench::cmd_synth(&cfg)?,
        Cmd::Unwrap { .. } => bench::cmd_unwrap(&cfg)?,
        Cmd::Table1 => bench::cmd_table1(&cfg)?,
        Cmd::Estimate => bench::cmd_estimate(&cfg)?,
        Cmd::Sweep => bench::cmd_sweep(&cfg)?,
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phasebench: {e}");
            ExitCode::from(bench::exit_code(&e) as u8)
        }
    }
}
