use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod generate;
mod manifest;
mod profile;
mod solve;
mod tune;

/// Fractional inverse parallel root finding with kNN Lyapunov profiling.
#[derive(Parser, Debug)]
#[command(name = "fracroot", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an alpha scan over a jittered ensemble and write the s_k / r_k matrices.
    Generate(generate::GenerateArgs),
    /// Compute sliding-window Lyapunov profiles from matrix files.
    Profile(profile::ProfileArgs),
    /// Classify alpha values from their profiles and select one.
    Tune(tune::TuneArgs),
    /// Solve one polynomial from one starting vector.
    Solve(solve::SolveArgs),
}

/// Bad flag values; reported with exit code 2 like clap's own errors.
#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn msg(m: impl Into<String>) -> Self {
        UsageError(m.into())
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<fracroot::Error> for UsageError {
    fn from(e: fracroot::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// A solve that diverged; exit code 3.
#[derive(Debug)]
pub struct Diverged;

impl std::fmt::Display for Diverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("solver diverged")
    }
}

impl std::error::Error for Diverged {}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| UsageError::msg(format!("not a finite number: {t:?}")).into())
        })
        .collect()
}

pub fn default_out() -> PathBuf {
    PathBuf::from("data")
}

pub fn manifest_dir(manifest: &Path) -> PathBuf {
    match manifest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Profile(a) => profile::run(a),
        Command::Tune(a) => tune::run(a),
        Command::Solve(a) => solve::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<Diverged>().is_some() => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
