//! `tubediff`: runs one tube-diffusion scenario and writes a CSV plus a JSON manifest.

mod config;
mod error;
mod output;
mod scenarios;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ScenarioConfig, ScenarioKind};
use error::CliError;

#[derive(Parser)]
#[command(name = "tubediff", version, about = "Diffusion in thin curved tubes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML scenario file; every table is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "tubediff-out")]
    out: PathBuf,

    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for Brownian dynamics.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Frenet–Serret frames along the centerline.
    Frames,
    /// Effective diffusivity table over κε.
    Deff,
    /// Quasi-one-dimensional transport from the configured initial field.
    Solve1d,
    /// Reflecting Brownian dynamics in the tube.
    Mc3d,
    /// Analytic, 1D and Brownian MSD side by side.
    MsdCompare,
    /// Steady profile for fixed end densities or flux.
    Static,
    /// Slice of the cross-sectional correction field.
    Fluct,
}

impl From<Command> for ScenarioKind {
    fn from(c: Command) -> Self {
        match c {
            Command::Frames => ScenarioKind::Frames,
            Command::Deff => ScenarioKind::Deff,
            Command::Solve1d => ScenarioKind::Solve1d,
            Command::Mc3d => ScenarioKind::Mc3d,
            Command::MsdCompare => ScenarioKind::MsdCompare,
            Command::Static => ScenarioKind::Static,
            Command::Fluct => ScenarioKind::Fluct,
        }
    }
}

fn load(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Config {
                field: "--config".into(),
                reason: format!("{}: {e}", path.display()),
            })?;
            ScenarioConfig::parse(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let kind = ScenarioKind::from(cli.command);
    let mut cfg = load(cli)?;
    cfg.scenario.get_or_insert(kind);
    let outcome = scenarios::run_scenario(kind, &cfg)?;
    output::write_outputs(&cli.out, kind, &cfg, &outcome.table, outcome.results)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
