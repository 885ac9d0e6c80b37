use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use starbath_cli::output::{write_job, write_report};
use starbath_cli::{
    run_job, run_validate, ExperimentConfig, GridSpec, HarnessError, JobKind, PivnChoice,
};

#[derive(Parser)]
#[command(
    name = "starbath",
    version,
    about = "Star-bath oscillator thermodynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time series of every observable
    Simulate(Common),
    /// sigma_11 exact vs GKSL
    Fig1(Common),
    /// Energy fluxes
    Fig2(Common),
    /// Entropy production rates
    Fig3(Common),
    /// System and bath temperatures
    Fig4(Common),
    /// Per-mode temperatures and fluxes near resonance
    Fig5(Common),
    /// Entropy production and its 1/N dependence
    Fig6(Common),
    /// Entropy production difference against 1/N
    SweepN(Common),
    /// Invariant suites and oracle comparisons
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// JSON config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bath size(s), comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Time grid start:end:points in us
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum)]
    pivn_mode: Option<PivnChoice>,
    /// Largest bath size accepted by the dense oracle
    #[arg(long)]
    oracle_cap: Option<usize>,
}

#[derive(Args, Clone)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Negate x_j before the flux checks (mutation test)
    #[arg(long)]
    inject_x_sign_flip: bool,
}

fn configure(job: JobKind, args: &Common) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.job = job;
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(n) = &args.n {
        cfg.n = None;
        cfg.n_list = Some(n.clone());
    }
    if let Some(grid) = &args.grid {
        cfg.grid = GridSpec::parse(grid)?;
    }
    if let Some(mode) = args.pivn_mode {
        cfg.pivn_mode = mode;
    }
    if let Some(cap) = args.oracle_cap {
        cfg.oracle_cap = cap;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    let (job, common) = match &cli.command {
        Command::Simulate(c) => (JobKind::Simulate, c),
        Command::Fig1(c) => (JobKind::Fig1, c),
        Command::Fig2(c) => (JobKind::Fig2, c),
        Command::Fig3(c) => (JobKind::Fig3, c),
        Command::Fig4(c) => (JobKind::Fig4, c),
        Command::Fig5(c) => (JobKind::Fig5, c),
        Command::Fig6(c) => (JobKind::Fig6, c),
        Command::SweepN(c) => (JobKind::SweepN, c),
        Command::Validate(v) => (JobKind::Validate, &v.common),
    };
    let mut cfg = configure(job, common)?;
    if let Command::Validate(v) = &cli.command {
        cfg.validate.inject_x_sign_flip |= v.inject_x_sign_flip;
        let report = run_validate(&cfg)?;
        for c in &report.checks {
            println!(
                "{} {}::{} measured={:e} tolerance={:e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.module,
                c.name,
                c.measured,
                c.tolerance
            );
        }
        let path = write_report(&cfg.out_dir, &report)?;
        println!("report: {}", path.display());
        let failed = report.failures().count();
        if failed > 0 {
            return Err(HarnessError::ValidationFailed {
                failed,
                total: report.checks.len(),
            });
        }
        return Ok(());
    }
    let out = run_job(&cfg)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for path in write_job(&cfg.out_dir, &cfg, &out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
