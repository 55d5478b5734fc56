use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sclbench_cli::config::parse_config;
use sclbench_cli::report::{aggregate_runs, format_table, load_runs};
use sclbench_cli::{plot, CliError};

/// Streaming continual-learning benchmark runner.
#[derive(Parser)]
#[command(name = "sclbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured (strategy x seed) grid and write all artifacts.
    Run {
        /// Experiment configuration (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides run.out_dir in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parallel grid cells (overrides SCLBENCH_JOBS and run.jobs).
        #[arg(long)]
        jobs: Option<usize>,
        /// Master seed for strategy RNG streams (overrides run.master_seed).
        #[arg(long)]
        master_seed: Option<u64>,
    },
    /// Recompute and print the summary table from persisted runs.
    Report {
        /// Directory written by `run`.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Re-render the kappa-over-steps SVG from persisted runs.
    Plot {
        /// Directory written by `run`.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn env_jobs() -> Option<usize> {
    std::env::var("SCLBENCH_JOBS").ok()?.parse().ok()
}

fn run() -> Result<ExitCode, CliError> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            jobs,
            master_seed,
        } => {
            let mut experiment = parse_config(&config)?;
            if let Some(seed) = master_seed {
                experiment.run.master_seed = seed;
            }
            let out_dir = out
                .or_else(|| experiment.run.out_dir.clone())
                .ok_or_else(|| {
                    CliError::Config("no output directory: pass --out or set run.out_dir".into())
                })?;
            let jobs = jobs
                .or_else(env_jobs)
                .or(experiment.run.jobs)
                .unwrap_or(1);
            let outcome = sclbench_cli::execute(&experiment, &out_dir, jobs)?;
            for status in &outcome.statuses {
                match &status.outcome {
                    Ok(()) => eprintln!("ok    {} seed {}", status.strategy, status.seed),
                    Err(e) => eprintln!("ERROR {} seed {}: {e}", status.strategy, status.seed),
                }
            }
            if !outcome.results.is_empty() {
                let rows = aggregate_runs(&outcome.results)?;
                print!("{}", format_table(&rows));
            }
            if outcome.all_ok() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("one or more runs failed; see run_status.csv");
                Ok(ExitCode::from(2))
            }
        }
        Command::Report { input } => {
            let results = load_runs(&input)?;
            let rows = aggregate_runs(&results)?;
            print!("{}", format_table(&rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { input, out } => {
            let results = load_runs_with_traces(&input)?;
            let outcome = sclbench_cli::grid::GridOutcome {
                scenario_name: results
                    .first()
                    .map(|r| r.scenario.clone())
                    .unwrap_or_default(),
                boundaries: boundaries_of(&results),
                statuses: vec![],
                results,
            };
            plot::plot_outcome(&outcome, &out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Reload persisted matrices together with their trace CSV files.
fn load_runs_with_traces(
    dir: &std::path::Path,
) -> Result<Vec<sclbench_cli::grid::CellResult>, CliError> {
    use sclbench_core::eval::{PrequentialTrace, TraceStep};
    let mut results = load_runs(dir)?;
    for cell in &mut results {
        let path = dir
            .join("runs")
            .join(format!("trace_{}_{}.csv", cell.strategy, cell.seed));
        let raw = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut steps = Vec::new();
        // Skip the schema_version comment and the header row.
        for line in raw.lines().skip(2) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(CliError::Config(format!(
                    "malformed trace row in {}: `{line}`",
                    path.display()
                )));
            }
            let parse_usize = |s: &str| -> Result<usize, CliError> {
                s.parse()
                    .map_err(|_| CliError::Config(format!("bad trace field `{s}`")))
            };
            steps.push(TraceStep {
                step: parse_usize(fields[0])?,
                concept: parse_usize(fields[1])?,
                y_true: parse_usize(fields[2])?,
                y_pred: parse_usize(fields[3])?,
                kappa: fields[4]
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad kappa `{}`", fields[4])))?,
            });
        }
        cell.trace = PrequentialTrace {
            steps,
            boundaries: vec![],
        };
    }
    Ok(results)
}

/// Concept boundaries recovered from a trace: steps where the concept
/// column changes.
fn boundaries_of(results: &[sclbench_cli::grid::CellResult]) -> Vec<usize> {
    let Some(cell) = results.first() else {
        return vec![];
    };
    let mut boundaries = Vec::new();
    let mut prev = None;
    for s in &cell.trace.steps {
        if let Some(p) = prev {
            if s.concept != p {
                boundaries.push(s.step);
            }
        }
        prev = Some(s.concept);
    }
    boundaries
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
