use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use fdnet_core::config::{parse_config, ExperimentConfig, ExperimentKind};
use fdnet_core::harness::{metric_names, run_experiment_with, Exec};
use fdnet_core::report::{emit_csv, emit_plot_csv};

/// Monte-Carlo experiments for full-duplex wireless resource allocation.
#[derive(Debug, Parser)]
#[command(name = "fdnet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment and write `<name>.csv` and `<name>_plot.csv`.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured trial count.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Parse and check a configuration without running trials.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the available experiment kinds.
    ListExperiments,
}

const THREADS_VAR: &str = "FDNET_THREADS";

fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_config(&text).with_context(|| format!("invalid configuration {}", path.display()))
}

fn exec_from_env() -> Result<Exec> {
    match env::var(THREADS_VAR) {
        Err(env::VarError::NotPresent) => Ok(Exec::Parallel),
        Err(e) => bail!("{THREADS_VAR}: {e}"),
        Ok(v) if v.trim().is_empty() => Ok(Exec::Parallel),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(Exec::Parallel),
            Ok(1) => Ok(Exec::Sequential),
            Ok(n) => Ok(Exec::Threads(n)),
            Err(_) => bail!("{THREADS_VAR} must be a nonnegative integer, got `{v}`"),
        },
    }
}

fn run(config: &Path, out: &Path, seed: Option<u64>, trials: Option<u64>) -> Result<()> {
    let mut cfg = load(config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(trials) = trials {
        cfg.trials = trials;
    }
    cfg.validate().context("invalid command-line override")?;
    let exec = exec_from_env()?;

    let records = run_experiment_with(&cfg, exec).with_context(|| format!("experiment `{}` failed", cfg.name))?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let csv = out.join(format!("{}.csv", cfg.name));
    let plot = out.join(format!("{}_plot.csv", cfg.name));
    emit_csv(&records, &csv).with_context(|| format!("cannot write {}", csv.display()))?;
    emit_plot_csv(&records, &plot).with_context(|| format!("cannot write {}", plot.display()))?;
    eprintln!("wrote {} and {}", csv.display(), plot.display());
    Ok(())
}

fn validate(config: &Path) -> Result<()> {
    let cfg = load(config)?;
    println!(
        "ok: {} `{}`, {} = [{}], {} trials per point, seed {}, metrics: {}",
        cfg.kind,
        cfg.name,
        cfg.sweep.param.name(),
        cfg.sweep.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
        cfg.trials,
        cfg.seed,
        metric_names(&cfg).join(", ")
    );
    Ok(())
}

fn list_experiments() {
    for kind in ExperimentKind::ALL {
        let sweep = kind.default_sweep();
        let params: Vec<_> = kind.sweep_params().iter().map(|p| p.name()).collect();
        println!("{kind}");
        println!("    {}", kind.description());
        println!(
            "    default sweep: {} = [{}]; sweepable: {}",
            sweep.param.name(),
            sweep.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "),
            params.join(", ")
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            trials,
        } => run(&config, &out, seed, trials),
        Command::Validate { config } => validate(&config),
        Command::ListExperiments => {
            list_experiments();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
