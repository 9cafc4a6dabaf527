//! `qfock`: runs named numerical experiments from JSON config files.

mod catalog;
mod config;
mod error;
mod experiments;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::Artifacts;

#[derive(Parser)]
#[command(name = "qfock", version, about = "Quaternionic Fock-space experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    ///
    /// Exit status: 0 when all checks pass, 1 when a check fails,
    /// 2 for config or I/O errors.
    Run {
        config: PathBuf,
    },
    /// List the available experiments.
    List {
        /// Print the catalog as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn list(as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(catalog::EXPERIMENTS).expect("catalog serializes"));
        return;
    }
    let width = catalog::EXPERIMENTS.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in catalog::EXPERIMENTS {
        println!("{:width$}  {}", e.name, e.description);
        println!("{:width$}  checks: {}", "", e.checks);
    }
}

fn run(path: &Path) -> CliResult<bool> {
    let cfg = ExperimentConfig::load(path)?;
    let mut art = Artifacts::new(&cfg.output_dir)?;
    let out = experiments::run(&cfg, &mut art)?;
    let ok = out.ok();
    let verdict = json!({
        "experiment": cfg.info.name,
        "seed": cfg.seed,
        "ok": ok,
        "checks": out.checks,
        "summary": out.summary,
        "tables": art.written(),
    });
    art.json(&format!("{}.json", cfg.info.name), &verdict)?;
    for c in &out.checks {
        let tol = c.tolerance.map(|t| format!(" (tolerance {t:e})")).unwrap_or_default();
        let value = if c.tolerance.is_some() { format!(": {:e}", c.value) } else { String::new() };
        println!("{} {}{value}{tol}", if c.pass { "PASS" } else { "FAIL" }, c.name);
    }
    println!("{}: {} checks, {} failed; output in {}", cfg.info.name, out.checks.len(), out.checks.iter().filter(|c| !c.pass).count(), art.dir().display());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List { json } => {
            list(json);
            ExitCode::SUCCESS
        }
        Command::Run { config } => match run(&config) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("qfock: {e}");
                ExitCode::from(e.exit_code())
            }
        },
    }
}
