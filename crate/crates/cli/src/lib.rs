//! Configuration-driven benchmark runner: seeded (scenario x strategy)
//! grids, persisted traces and kappa matrices, summary aggregation, and
//! static SVG plots.

pub mod config;
pub mod grid;
pub mod plot;
pub mod report;

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration file or missing input (exit code 1).
    #[error("config error: {0}")]
    Config(String),
    /// Anything that broke while executing or persisting runs.
    #[error("{0}")]
    Core(#[from] sclbench_core::CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Internal(String),
}

/// Execute a full experiment: run the grid, persist per-run files, emit
/// the combined report, and render the scenario plot. Returns the outcome
/// so callers can inspect statuses.
pub fn execute(
    config: &config::ExperimentConfig,
    out_dir: &Path,
    jobs: usize,
) -> Result<grid::GridOutcome, CliError> {
    let outcome = grid::run_grid(config, jobs)?;
    std::fs::create_dir_all(out_dir)?;
    grid::persist_runs(&outcome, out_dir)?;
    if !outcome.results.is_empty() {
        report::emit_report(&outcome, out_dir)?;
        let plot_path = out_dir.join(format!("kappa_{}.svg", outcome.scenario_name));
        plot::plot_outcome(&outcome, &plot_path)?;
    }
    Ok(outcome)
}
