//! Argument parsing and the top-level driver shared by the binary and tests.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::artifact::Outcome;
use crate::commands::{run, Command};
use crate::config::{parse_grid, parse_rational, ExperimentConfig};
use crate::suite::{run_suite_with, suite_artifacts};
use crate::{configure_threads, CliError};

/// Exit status for failed checks.
pub const EXIT_CHECKS_FAILED: u8 = 1;
/// Exit status for configuration, parse and i/o errors.
pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "cascade-lab", version, about = "Wavelet cascade, transfer operator and Zak transform laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Sub>,
    /// Run a named suite instead of a subcommand (only `acceptance`).
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Check the low-pass, QMF and continuity axioms.
    Validate(Params),
    /// Cascade trace CSV and convergence verdict JSON.
    Cascade(Params),
    /// Fixed space of the transfer operator and a peripheral spectral scan.
    Ruelle(Params),
    /// Zak-domain commutation relations, isometry and operator dictionary.
    ZakHarness(Params),
    /// Wold sets, tiling report and, for the Shannon filter, the split cascade trace.
    Wold(Params),
    /// Identities of the sequence model of the sub-isometry.
    ModelCheck(Params),
}

#[derive(Args, Debug, Default)]
pub struct Params {
    /// Filter JSON file, or a built-in name.
    #[arg(value_name = "FILTER")]
    pub filter_arg: Option<String>,
    #[arg(long)]
    pub filter: Option<String>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub degree: Option<i64>,
    /// `NZ,NX`; model-check reads the first entry as its circle grid.
    #[arg(long)]
    pub grid: Option<String>,
    /// Half-width in units of π, e.g. `16` or `33/2`.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub kmax: Option<u32>,
    /// `box:a,b`, `haar`, `gauss:s` or `seq:[c0,c1,...]`.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Tolerance override `NAME=VALUE`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

impl Sub {
    fn split(self) -> (Command, Params) {
        match self {
            Sub::Validate(p) => (Command::Validate, p),
            Sub::Cascade(p) => (Command::Cascade, p),
            Sub::Ruelle(p) => (Command::Ruelle, p),
            Sub::ZakHarness(p) => (Command::ZakHarness, p),
            Sub::Wold(p) => (Command::Wold, p),
            Sub::ModelCheck(p) => (Command::ModelCheck, p),
        }
    }
}

impl Params {
    pub fn into_config(self, seed: Option<u64>, out_dir: Option<PathBuf>) -> Result<ExperimentConfig, CliError> {
        if self.filter.is_some() && self.filter_arg.is_some() {
            return Err(CliError::Config("give the filter either positionally or with --filter".into()));
        }
        let mut cfg = ExperimentConfig {
            filter: self.filter.or(self.filter_arg),
            iters: self.iters,
            degree: self.degree,
            grid: self.grid.as_deref().map(parse_grid).transpose()?,
            window: self.window.as_deref().map(parse_rational).transpose()?,
            kmax: self.kmax,
            start: self.start.as_deref().map(str::parse).transpose()?,
            trials: self.trials,
            levels: self.levels,
            seed: self.seed.or(seed),
            out_dir: self.out_dir.or(out_dir),
            ..Default::default()
        };
        for t in &self.tol {
            cfg.tolerances.set(t)?;
        }
        Ok(cfg)
    }
}

fn emit(outcome: &Outcome, out_dir: Option<&PathBuf>) -> Result<(), CliError> {
    match out_dir {
        Some(dir) => outcome.write_to(dir)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            for a in &outcome.artifacts {
                writeln!(stdout, "# {}", a.name)?;
                stdout.write_all(&a.bytes)?;
            }
        }
    }
    if !outcome.passed() {
        eprintln!("{}", outcome.failure_json()?);
    }
    Ok(())
}

fn run_acceptance(seed: u64, out_dir: Option<&PathBuf>) -> Result<Outcome, CliError> {
    let results = run_suite_with(seed, |r| println!("{}", r.summary()));
    let mut outcome = Outcome { artifacts: suite_artifacts(&results), failures: Vec::new() };
    for r in &results {
        outcome.require(format!("criterion {}", r.id), r.pass(), || {
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
            if failed.is_empty() {
                "runtime budget exceeded".into()
            } else {
                failed.join("; ")
            }
        });
    }
    if let Some(dir) = out_dir {
        outcome.write_to(dir)?;
    }
    if !outcome.passed() {
        eprintln!("{}", outcome.failure_json()?);
    }
    Ok(outcome)
}

/// Parses `args`, runs the request and returns the process exit status.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match drive(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECKS_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

/// `Ok(passed)` on a completed run.
pub fn drive(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match (cli.suite.as_deref(), cli.command) {
        (Some("acceptance"), None) => {
            Ok(run_acceptance(cli.seed.unwrap_or(crate::config::DEFAULT_SEED), cli.out_dir.as_ref())?.passed())
        }
        (Some(other), None) => Err(CliError::Config(format!("unknown suite {other:?}; available: acceptance"))),
        (Some(_), Some(_)) => Err(CliError::Config("--suite cannot be combined with a subcommand".into())),
        (None, None) => Err(CliError::Config("a subcommand or --suite is required (see --help)".into())),
        (None, Some(sub)) => {
            let (command, params) = sub.split();
            let cfg = params.into_config(cli.seed, cli.out_dir)?;
            let outcome = run(command, &cfg)?;
            emit(&outcome, cfg.out_dir.as_ref())?;
            Ok(outcome.passed())
        }
    }
}
