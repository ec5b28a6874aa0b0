//! Experiment runner for `cascade-core`: filter validation, cascade traces,
//! transfer-operator fixed spaces, the Zak harness, Wold sets and the
//! acceptance suite, all writing deterministic CSV and JSON artifacts.

pub mod artifact;
pub mod cli;
pub mod commands;
pub mod config;
pub mod suite;

pub use artifact::{Artifact, Failure, Outcome};
pub use commands::{run, Command};
pub use config::{load_filter, ExperimentConfig, StartSpec, Tolerances};

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "CASCADE_LAB_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cascade_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config: {0}")]
    Config(String),
}

/// Sizes the global rayon pool from `CASCADE_LAB_THREADS`, if set. Later calls are no-ops.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // An already-built pool keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
