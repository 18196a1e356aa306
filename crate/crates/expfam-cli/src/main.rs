//! `expfam-lab`: seeded Monte Carlo experiments on exponential-family
//! estimators, written out as CSV and static SVG.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 when a requested
//! internal assertion fails (a bound sandwich, a gap threshold), 4 for I/O
//! errors. Failures are reported as one JSON line on stderr.

mod commands;
mod config;
mod csvio;
mod error;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{bias_variance, bounds_table, prior_landscape, risk_curve, smd_check, table1};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "expfam-lab",
    about = "Monte Carlo laboratory for MLE/MAP risk in exponential families",
    long_about = None,
    after_help = family_help()
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// MLE and MAP risk curves with bound overlays.
    RiskCurve(risk_curve::RiskCurveArgs),
    /// Bias-variance split of the expected Bregman risk.
    BiasVariance(bias_variance::BiasVarianceArgs),
    /// MAP risk heat maps over the prior hyperparameters.
    PriorLandscape(prior_landscape::PriorLandscapeArgs),
    /// Check that mirror descent reproduces the closed-form MAP.
    SmdCheck(smd_check::SmdCheckArgs),
    /// Boundedness verdicts for SMD variance assumptions.
    Table1(table1::Table1Args),
    /// Tabulate closed-form bounds and exact risks.
    BoundsTable(bounds_table::BoundsTableArgs),
}

fn family_help() -> String {
    let mut s = String::from("Families:\n");
    for (name, summary) in expfam::families::catalog() {
        s.push_str(&format!("  {name:<22} {summary}\n"));
    }
    s
}

fn common_of(command: &Command) -> &config::CommonArgs {
    match command {
        Command::RiskCurve(a) => &a.common,
        Command::BiasVariance(a) => &a.common,
        Command::PriorLandscape(a) => &a.common,
        Command::SmdCheck(a) => &a.common,
        Command::Table1(a) => &a.common,
        Command::BoundsTable(a) => &a.common,
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    common_of(&cli.command).install_workers()?;
    match &cli.command {
        Command::RiskCurve(args) => risk_curve::run(args),
        Command::BiasVariance(args) => bias_variance::run(args),
        Command::PriorLandscape(args) => prior_landscape::run(args),
        Command::SmdCheck(args) => smd_check::run(args),
        Command::Table1(args) => table1::run(args),
        Command::BoundsTable(args) => bounds_table::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.report());
            ExitCode::from(err.code())
        }
    }
}
