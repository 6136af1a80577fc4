//! Command-line front end: scenario files in, CSV tables and summaries out.

pub mod commands;
pub mod error;
pub mod scenario;
pub mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsch_delay::phy154::DEFAULT_SHANNON_SYMBOLS;
use tsch_delay::Execution;

use crate::commands::{Context, Report, SweepVariable};
use crate::error::CliError;
use crate::scenario::ScenarioFile;

/// Targets used when neither the scenario nor `--targets` lists any.
pub const DEFAULT_TARGETS: std::ops::RangeInclusive<u64> = 0..=30;

#[derive(Debug, Parser)]
#[command(name = "tsch-delay", version, about = "Delay bounds and simulation for TSCH/WirelessHART paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the scenario's simulation seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Delay targets in superframes, e.g. `0..30` or `1,5,10..12`.
    #[arg(long, value_parser = parse_targets)]
    pub targets: Option<TargetList>,
    /// Evaluate independent points one after another.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetList(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq)]
pub struct ValueList(pub Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    #[value(name = "r-a")]
    RA,
    SnrDb,
    Hops,
    SnrGainDb,
}

impl From<SweepArg> for SweepVariable {
    fn from(v: SweepArg) -> Self {
        match v {
            SweepArg::RA => SweepVariable::RA,
            SweepArg::SnrDb => SweepVariable::SnrDb,
            SweepArg::Hops => SweepVariable::Hops,
            SweepArg::SnrGainDb => SweepVariable::SnrGainDb,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytical violation bound per target delay.
    Bound(Common),
    /// Monte Carlo estimate of the violation probability per target delay.
    Simulate(Common),
    /// Simulation overlaid on the analytical bound, with a pass/fail verdict.
    Validate(Common),
    /// Bound over a range of one scenario parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        variable: SweepArg,
        /// Swept values, e.g. `0,3.0103,6.0206` or `1..4` (inclusive, step 1).
        #[arg(long, value_parser = parse_values, conflicts_with_all = ["from", "to"])]
        values: Option<ValueList>,
        #[arg(long, requires = "to")]
        from: Option<f64>,
        #[arg(long, requires = "from")]
        to: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Equal power split over 1..=N equally spaced hops.
    PowerSplit {
        #[command(flatten)]
        common: Common,
        /// Overrides `power_split.num_hops`.
        #[arg(long)]
        num_hops: Option<u32>,
    },
    /// 802.15.4 and Shannon-capacity bounds next to the simulated estimate.
    CompareShannon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        symbols_per_slot: Option<u32>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Bound(c) | Command::Simulate(c) | Command::Validate(c) => c,
            Command::Sweep { common, .. }
            | Command::PowerSplit { common, .. }
            | Command::CompareShannon { common, .. } => common,
        }
    }
}

fn parse_list<T>(text: &str, expand: impl Fn(&str, &str) -> Result<Vec<T>, String>, single: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => out.extend(expand(a.trim(), b.trim().trim_start_matches('='))?),
            None => out.push(single(part)?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

pub fn parse_targets(text: &str) -> Result<TargetList, String> {
    let int = |s: &str| s.parse::<u64>().map_err(|e| format!("bad target `{s}`: {e}"));
    parse_list(
        text,
        |a, b| {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(format!("empty range {a}..{b}"));
            }
            Ok((a..=b).collect())
        },
        int,
    )
    .map(TargetList)
}

pub fn parse_values(text: &str) -> Result<ValueList, String> {
    let real = |s: &str| s.parse::<f64>().map_err(|e| format!("bad value `{s}`: {e}"));
    parse_list(text, |a, b| range_values(real(a)?, real(b)?, 1.0), real).map(ValueList)
}

/// `from, from + step, …` up to and including `to` (with a small tolerance).
pub fn range_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step.is_finite() && step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(format!("invalid range {from}..{to} step {step}"));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err("range has more than a million points".into());
    }
    Ok((0..=count).map(|i| from + i as f64 * step).collect())
}

/// Runs one subcommand.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let common = cli.command.common();
    let scenario = ScenarioFile::load(&common.scenario)?;
    let targets = match &common.targets {
        Some(t) => t.0.clone(),
        None if !scenario.targets.is_empty() => scenario.targets.clone(),
        None => DEFAULT_TARGETS.collect(),
    };
    let ctx = Context {
        targets,
        seed: common.seed,
        execution: if common.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
        scenario,
    };
    match &cli.command {
        Command::Bound(_) => commands::bound(&ctx),
        Command::Simulate(_) => commands::simulate(&ctx),
        Command::Validate(_) => commands::validate(&ctx),
        Command::Sweep {
            variable,
            values,
            from,
            to,
            step,
            ..
        } => {
            let values = match (values, from, to) {
                (Some(v), _, _) => v.0.clone(),
                (None, Some(a), Some(b)) => range_values(*a, *b, *step).map_err(CliError::Input)?,
                _ => return Err(CliError::Input("sweep needs --values or --from/--to".into())),
            };
            commands::sweep(&ctx, (*variable).into(), &values)
        }
        Command::PowerSplit { num_hops, .. } => {
            let mut spec = ctx.scenario.power_split.clone().unwrap_or_default();
            if let Some(h) = num_hops {
                spec.num_hops = *h;
            }
            commands::power_split(&ctx, &spec)
        }
        Command::CompareShannon { symbols_per_slot, .. } => {
            let symbols = symbols_per_slot.unwrap_or(match ctx.scenario.model {
                scenario::ModelSection::Shannon { symbols_per_slot } => symbols_per_slot,
                scenario::ModelSection::Ieee802154 => DEFAULT_SHANNON_SYMBOLS,
            });
            commands::compare_shannon(&ctx, symbols)
        }
    }
}
