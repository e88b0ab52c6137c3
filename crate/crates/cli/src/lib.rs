//! Command-line runner: reproduction harnesses, ensemble sweeps and thin
//! wrappers around the library operations, all emitting JSON or CSV
//! reports with a header of the settings used.

pub mod commands;
pub mod output;
pub mod settings;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub use output::Outcome;
pub use settings::{Format, Settings};

#[derive(Debug, Parser)]
#[command(name = "noerlund", version, about = "Nörlund means of operator powers: experiments and reproductions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Non-power-bounded 2x2 operator whose means still converge.
    #[command(name = "reproduce-6-10")]
    Reproduce610,
    /// Weighted shift with subexponential but superpolynomial power growth.
    #[command(name = "reproduce-6-3")]
    Reproduce63,
    /// Stratified random operators: spectral verdict vs. empirical status.
    Ensemble,
    /// Least concave majorant of a sequence file.
    Lcm,
    /// Majorant with concave p-th difference, plus its growth report.
    BuildMajorant,
    /// Cesàro (or Nörlund) means of an operator file.
    CesaroMeans,
}

impl Cli {
    pub fn resolved_settings(&self) -> Result<Settings> {
        let base = match &self.config {
            Some(path) => Settings::from_toml_file(path)?,
            None => Settings::default(),
        };
        Ok(self.settings.clone().over(base))
    }
}

pub fn run(command: Command, settings: &Settings) -> Result<Outcome> {
    match command {
        Command::Reproduce610 => commands::reproduce::reproduce_6_10(settings),
        Command::Reproduce63 => commands::reproduce::reproduce_6_3(settings),
        Command::Ensemble => commands::ensemble::ensemble(settings),
        Command::Lcm => commands::sequences::lcm(settings),
        Command::BuildMajorant => commands::sequences::build(settings),
        Command::CesaroMeans => commands::means::cesaro_means(settings),
    }
}
