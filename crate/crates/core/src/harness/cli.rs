//! `evogame` command line.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use super::config::{parse_config, ExperimentKind, ExperimentSpec};
use super::experiment::run_experiment;
use crate::error::{Error, Result};
use crate::gamespace::{stationary_distribution, TransitionRates};

#[derive(Debug, Parser)]
#[command(name = "evogame", version, about = "Evolutionary games with Markov game transitions on networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the stationary distribution and expected counts as CSV.
    Theory {
        /// Up rates and down rates, e.g. `0.01,0.06;0.04,0.08`
        /// (lambda0,lambda1;mu1,mu2).
        #[arg(long)]
        rates: String,
        /// Population size for the expected counts.
        #[arg(long = "n", default_value_t = 1000)]
        n: usize,
    },
    /// Run one time series experiment.
    Simulate(RunArgs),
    /// Run the occupancy-distribution study.
    Dist(RunArgs),
    /// Run the experiment named in the config's `[experiment]` section.
    Sweep(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::validation("rates", format!("`{x}` is not a number")))
        })
        .collect()
}

/// Parses `lambda0,...;mu1,...`.
pub fn parse_rates(text: &str) -> Result<TransitionRates> {
    let (up, down) = text
        .split_once(';')
        .ok_or_else(|| Error::validation("rates", "expected `lambda0,...;mu1,...`"))?;
    TransitionRates::new(parse_list(up)?, parse_list(down)?)
}

/// Formats with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 20) as usize;
    format!("{x:.decimals$}")
}

/// The `theory` table: `state,pi,expected_count`.
pub fn theory_csv(rates: &TransitionRates, n: usize) -> Result<String> {
    let pi = stationary_distribution(rates)?.pi;
    let mut out = String::from("state,pi,expected_count\n");
    for (i, p) in pi.iter().enumerate() {
        out.push_str(&format!("G{i},{},{}\n", sig6(*p), sig6(p * n as f64)));
    }
    Ok(out)
}

fn load(args: &RunArgs, kind: Option<ExperimentKind>) -> Result<ExperimentSpec> {
    let mut spec = parse_config(&args.config)?;
    if let Some(seed) = args.seed {
        spec.base.seed = seed;
    }
    if let Some(kind) = kind {
        spec.experiment.kind = kind;
        spec.experiment.axes.clear();
    }
    ExperimentSpec::resolve(spec.experiment, spec.base)
}

fn report(out: &Path, files: &[PathBuf]) {
    eprintln!("wrote {} files to {}", files.len(), out.display());
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Theory { rates, n } => {
            let text = theory_csv(&parse_rates(&rates)?, n)?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
        Command::Simulate(args) => {
            let spec = load(&args, Some(ExperimentKind::Timeseries))?;
            report(&args.out, &run_experiment(&spec, &args.out)?);
            Ok(())
        }
        Command::Dist(args) => {
            let spec = load(&args, Some(ExperimentKind::Dist))?;
            report(&args.out, &run_experiment(&spec, &args.out)?);
            Ok(())
        }
        Command::Sweep(args) => {
            let spec = load(&args, None)?;
            report(&args.out, &run_experiment(&spec, &args.out)?);
            Ok(())
        }
    }
}

/// Entry point shared by the binary. Usage errors print help and exit 2;
/// other failures print a diagnostic chain and exit 1.
pub fn main<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
