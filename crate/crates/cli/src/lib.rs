//! Experiment orchestration behind the `vaoi` binary.

pub mod args;
pub mod commands;
pub mod output;
pub mod spec;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::Path;

use thiserror::Error;

pub use commands::{run_analytic, run_cost, run_figure_data, run_scaling, run_simulate, run_validate, RunOutput};
pub use spec::{Command, ExperimentSpec, FigureId};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] vaoi::Error),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Dispatches a resolved spec to its command.
pub fn execute(spec: &ExperimentSpec) -> Result<RunOutput, CliError> {
    spec.validate().map_err(CliError::Usage)?;
    match spec.command {
        Command::Analytic => run_analytic(spec),
        Command::Simulate => run_simulate(spec),
        Command::Scaling => run_scaling(spec),
        Command::Cost => run_cost(spec),
        Command::Validate => run_validate(spec),
        Command::Figures => {
            let figure = spec.figure.ok_or_else(|| CliError::Usage("figures needs an id".into()))?;
            run_figure_data(figure, spec)
        }
    }
}

/// Writes the CSV (to `out`, or stdout) and the optional JSON mirror.
pub fn emit(spec: &ExperimentSpec, output: &RunOutput, out: Option<&Path>, json: Option<&Path>) -> Result<(), CliError> {
    let hash = output::spec_hash(spec);
    let meta = output::metadata_line(spec.seed, &hash);
    match out {
        Some(path) => output::write_csv(BufWriter::new(File::create(path)?), &meta, &output.rows)?,
        None => output::write_csv(io::stdout().lock(), &meta, &output.rows)?,
    }
    if let Some(path) = json {
        let mirror = output::JsonMirror {
            version: env!("CARGO_PKG_VERSION"),
            rng: vaoi::sim::RNG_NAME,
            spec_sha256: &hash,
            spec,
            rows: &output.rows,
        };
        let file = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(file, &mirror).map_err(io::Error::other)?;
    }
    Ok(())
}
