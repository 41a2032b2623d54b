use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use holoflow::scenario::{run, seed_of, Overrides, Scenario};
use holoflow::Rational64;

#[derive(Parser)]
#[command(name = "holoflow", version, about = "Run verification scenarios for holomorphic-flow expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write report.json plus CSV tables.
    Run {
        file: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest level, as a fraction `p/q`.
        #[arg(long, value_parser = parse_fraction)]
        max_level: Option<Rational64>,
    },
}

fn parse_fraction(s: &str) -> std::result::Result<Rational64, String> {
    s.parse().map_err(|_| format!("expected a fraction p/q, found '{s}'"))
}

fn execute(cli: Cli) -> Result<bool> {
    let Command::Run { file, out, tolerance, seed, max_level } = cli.command;
    let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
    let scenario = Scenario::parse(&text).with_context(|| format!("{}", file.display()))?;
    let overrides = Overrides { tolerance, seed, max_level };
    let outcome = run(&scenario, &overrides).with_context(|| format!("{}", file.display()))?;

    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let generated_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let report = outcome.report(seed_of(&scenario, &overrides), generated_at);
    let json = serde_json::to_string_pretty(&report)?;
    fs::write(out.join("report.json"), json + "\n")?;
    for (name, body) in &outcome.tables {
        fs::write(out.join(name), body)?;
    }
    for c in &outcome.checks {
        println!("{:<28} {}", c.name, if c.passed { "pass" } else { "FAIL" });
    }
    println!("report written to {}", out.join("report.json").display());
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
