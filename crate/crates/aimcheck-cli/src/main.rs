//! `aimcheck` command line: simulate datasets, train the GAN aimbots and
//! detectors, evaluate the threat scenarios and print reports.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration error,
//! 3 missing or stale artifact.

mod commands;
mod manifest;
mod reportfmt;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aimcheck::config::RunConfig;
use aimcheck::Error;

#[derive(Parser)]
#[command(name = "aimcheck", version, about = "Aim-duel simulator, GAN aimbot and anti-cheat evaluation toolkit")]
struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Root directory for artifacts; replaces the configured data/model/
    /// report dirs with <out>/data, <out>/models, <out>/reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Dotted-path config overrides, e.g. --set sim.episode_frames=1000
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the human, light and strong episode datasets.
    Simulate,
    /// Train one GAN group on the human dataset and simulate its episodes.
    TrainGan {
        /// GAN group to train (1 or 2).
        #[arg(long)]
        group: u8,
    },
    /// Train and checkpoint the detectors of one scenario.
    TrainDetector {
        /// worst-case | known-attack | oracle | train-on-test
        #[arg(long)]
        scenario: String,
    },
    /// Run every configured scenario and write the full report.
    Evaluate,
    /// Print the text summary of an existing report.
    Report,
    /// Print the effective configuration as TOML.
    PrintConfig,
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?,
        None => String::new(),
    };
    let mut value: toml::Value = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("config parse: {e}")))?;
    for item in &cli.set {
        apply_override(&mut value, item)?;
    }
    let mut config: RunConfig = value
        .try_into()
        .map_err(|e| Error::Config(format!("config parse: {e}")))?;
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        config.paths.data_dir = out.join("data");
        config.paths.model_dir = out.join("models");
        config.paths.report_dir = out.join("reports");
    }
    config.validate()?;
    Ok(config)
}

/// Applies one `a.b.c=value` override onto the raw TOML tree. The value is
/// parsed as a TOML literal, falling back to a string.
fn apply_override(root: &mut toml::Value, item: &str) -> Result<(), Error> {
    let (path, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("--set needs KEY=VALUE, got {item:?}")))?;
    let parsed: toml::Value = toml::from_str(&format!("v = {raw}"))
        .map(|t: toml::Value| t["v"].clone())
        .unwrap_or_else(|_| toml::Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("--set path {path:?} crosses a non-table")))?;
        if i + 1 == parts.len() {
            table.insert(part.to_string(), parsed);
            return Ok(());
        }
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    unreachable!("non-empty path")
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 2,
        Error::MissingArtifact { .. } | Error::ManifestMismatch { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    let result = match &cli.command {
        Command::Simulate => commands::simulate(&config),
        Command::TrainGan { group } => commands::train_gan(&config, *group),
        Command::TrainDetector { scenario } => commands::train_detector(&config, scenario),
        Command::Evaluate => commands::evaluate(&config),
        Command::Report => commands::report(&config),
        Command::PrintConfig => {
            println!("{}", config.to_toml_string());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
