//! Library side of the `lieconf` command: configuration, reports and the
//! subcommand implementations.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{ConfigError, Layer, RunConfig};
use report::Report;

#[derive(Debug, Parser)]
#[command(name = "lieconf", version, about = "Exact checks for Schrodinger-Virasoro type Lie conformal algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML file with defaults for any flag; flags given here win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub layer: Layer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check skew-symmetry and Jacobi for a catalog algebra.
    VerifyAxioms,
    /// Solve the construction family's (L,Y,Y) coefficient system.
    SolveConstruction,
    /// Check the module axioms for a rank one or graded module.
    CheckModule,
    /// Classify extensions of module families over a parameter grid.
    Classify,
    /// Solve for graded derivations, optionally checking a given one.
    Derivations,
    /// Run every acceptance criterion.
    PaperSuite,
}

impl Command {
    pub fn run(self, cfg: &RunConfig) -> Result<Report, ConfigError> {
        match self {
            Command::VerifyAxioms => commands::verify_axioms(cfg),
            Command::SolveConstruction => commands::solve_construction_cmd(cfg),
            Command::CheckModule => commands::check_module(cfg),
            Command::Classify => commands::classify(cfg),
            Command::Derivations => commands::derivations(cfg),
            Command::PaperSuite => commands::paper_suite(cfg),
        }
    }
}

/// Parses, runs and renders. Returns the rendered report, the report path
/// if one was configured, and whether everything passed.
pub fn execute(cli: Cli) -> Result<(String, Option<PathBuf>, bool), ConfigError> {
    let cfg = RunConfig::resolve(cli.layer, cli.config.as_deref())?;
    let report = cli.command.run(&cfg)?;
    Ok((report.render(cfg.format), cfg.report.clone(), report.passed))
}
