use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sclbench_core::eval::{
    acc_final, anytime_accuracy, bwt, cl_matrix, k_avg, prequential_run, Metric, PrequentialTrace,
};
use sclbench_core::learners::{AdaptiveForest, GaussianNb, HoeffdingTree, KnnWindow, Strategy};
use sclbench_core::neural::{ClStrategy, NeuralConfig, NeuralStrategy};
use sclbench_core::stream::{
    build_real_scenario, build_virtual_scenario, load_csv_scenario, Scenario, TaskId, TaskSpec,
};

use crate::config::{ExperimentConfig, ScenarioKind, StrategyConfig};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Everything persisted for one completed (strategy, seed) run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellResult {
    pub schema_version: u32,
    pub scenario: String,
    pub strategy: String,
    pub seed: u64,
    pub n_concepts: usize,
    /// Lower-triangular kappa matrix, row i holding entries K[i][0..=i].
    pub k: Vec<Vec<f64>>,
    pub k_avg: f64,
    pub bwt: Option<f64>,
    pub acc_final: f64,
    pub aaa: f64,
    #[serde(skip)]
    pub trace: PrequentialTrace,
}

/// Status of every attempted grid cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellStatus {
    pub strategy: String,
    pub seed: u64,
    pub outcome: Result<(), String>,
}

pub struct GridOutcome {
    pub results: Vec<CellResult>,
    pub statuses: Vec<CellStatus>,
    pub boundaries: Vec<usize>,
    pub scenario_name: String,
}

impl GridOutcome {
    pub fn all_ok(&self) -> bool {
        self.statuses.iter().all(|s| s.outcome.is_ok())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Independent, stable RNG seed per (master seed, strategy, scenario seed).
pub fn derive_seed(master: u64, strategy: &str, scenario_seed: u64) -> u64 {
    splitmix64(master ^ fnv1a(strategy.as_bytes()) ^ splitmix64(scenario_seed))
}

fn build_scenario(config: &ExperimentConfig, scenario_seed: u64) -> Result<Scenario, CliError> {
    let s = &config.scenario;
    let scenario = match s.kind {
        ScenarioKind::Virtual => build_virtual_scenario(
            scenario_seed,
            s.examples_per_concept,
            s.test_per_concept,
            s.noise,
        )?,
        ScenarioKind::Real => {
            let order: Vec<TaskSpec> = match &s.task_order {
                Some(names) => names
                    .iter()
                    .map(|n| TaskId::from_name(n).map(TaskSpec::builtin))
                    .collect::<Result<_, _>>()?,
                None => {
                    // Per-seed task order, as the benchmark averages over
                    // executions with different orders.
                    let mut order = TaskSpec::all_builtin().to_vec();
                    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(scenario_seed ^ 0x7461736b));
                    order.shuffle(&mut rng);
                    order
                }
            };
            build_real_scenario(
                scenario_seed,
                s.examples_per_concept,
                s.test_per_concept,
                s.noise,
                &order,
            )?
        }
        ScenarioKind::Csv => {
            let path = s.path.as_ref().expect("validated");
            load_csv_scenario(path)?
        }
    };
    Ok(scenario)
}

fn build_strategy(
    spec: &StrategyConfig,
    scenario: &Scenario,
    rng_seed: u64,
) -> Box<dyn Strategy> {
    let classes = scenario.n_classes;
    let dim = scenario.feature_dim;
    match spec.name.as_str() {
        "nb" => Box::new(GaussianNb::new(classes, dim)),
        "hoeffding" => Box::new(HoeffdingTree::with_params(
            classes,
            dim,
            spec.grace.unwrap_or(200),
            spec.split_confidence.unwrap_or(1e-7),
        )),
        "knn" => Box::new(KnnWindow::with_params(
            classes,
            dim,
            spec.knn_k.unwrap_or(5),
            spec.knn_window.unwrap_or(500),
        )),
        "forest" => Box::new(AdaptiveForest::with_params(
            classes,
            dim,
            spec.trees.unwrap_or(10),
            spec.lambda.unwrap_or(6.0),
            spec.member_grace.unwrap_or(50),
            rng_seed,
        )),
        name => {
            let kind = match name {
                "naive" => ClStrategy::Naive,
                "er" => ClStrategy::Replay,
                "agem" => ClStrategy::Agem,
                other => unreachable!("validated strategy name {other}"),
            };
            let defaults = NeuralConfig::default();
            let config = NeuralConfig {
                hidden: spec.hidden.unwrap_or(defaults.hidden),
                learning_rate: spec.learning_rate.unwrap_or(defaults.learning_rate),
                momentum: spec.momentum.unwrap_or(defaults.momentum),
                memory_capacity: spec.memory.unwrap_or(defaults.memory_capacity),
                replay_batch: spec.replay_batch.unwrap_or(defaults.replay_batch),
            };
            Box::new(NeuralStrategy::with_config(kind, dim, classes, config, rng_seed))
        }
    }
}

fn run_cell(
    config: &ExperimentConfig,
    spec: &StrategyConfig,
    scenario: &Scenario,
    scenario_seed: u64,
) -> Result<CellResult, CliError> {
    let rng_seed = derive_seed(config.run.master_seed, &spec.name, scenario_seed);
    let mut strategy = build_strategy(spec, scenario, rng_seed);
    let batch_size = if spec.is_neural() {
        config.evaluation.neural_batch
    } else {
        config.evaluation.classical_batch
    };
    let (trace, checkpoints) =
        prequential_run(scenario, strategy.as_mut(), batch_size, config.evaluation.window)?;
    let tests: Vec<&[sclbench_core::stream::LabeledExample]> = scenario
        .concepts
        .iter()
        .map(|c| c.test.as_slice())
        .collect();
    let matrix = cl_matrix(&checkpoints, &tests, Metric::Kappa, scenario.n_classes)?;
    let bwt_value = if scenario.n_concepts() >= 2 {
        Some(bwt(&matrix)?)
    } else {
        None
    };
    Ok(CellResult {
        schema_version: SCHEMA_VERSION,
        scenario: scenario.name.clone(),
        strategy: spec.name.clone(),
        seed: scenario_seed,
        n_concepts: scenario.n_concepts(),
        k: matrix.rows(),
        k_avg: k_avg(&matrix)?,
        bwt: bwt_value,
        acc_final: acc_final(&matrix)?,
        aaa: anytime_accuracy(&trace)?,
        trace,
    })
}

/// Execute the full (strategy x seed) grid with `jobs` worker threads.
/// Every cell is independent and seeded, so outputs do not depend on the
/// parallelism degree; a panicking or failing cell is reported in its
/// status and leaves the other cells untouched.
pub fn run_grid(config: &ExperimentConfig, jobs: usize) -> Result<GridOutcome, CliError> {
    config.validate()?;
    // Scenarios are shared per seed across strategies (fair comparison).
    let scenarios: Vec<Arc<Scenario>> = config
        .run
        .seeds
        .iter()
        .map(|&seed| build_scenario(config, seed).map(Arc::new))
        .collect::<Result<_, _>>()?;

    let cells: Vec<(usize, usize)> = (0..config.strategies.len())
        .flat_map(|s| (0..config.run.seeds.len()).map(move |i| (s, i)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;

    let outcomes: Vec<(CellStatus, Option<CellResult>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(si, seed_idx)| {
                let spec = &config.strategies[si];
                let seed = config.run.seeds[seed_idx];
                let scenario = Arc::clone(&scenarios[seed_idx]);
                let outcome = catch_unwind(AssertUnwindSafe(|| {
                    run_cell(config, spec, &scenario, seed)
                }));
                let (status, result) = match outcome {
                    Ok(Ok(result)) => (Ok(()), Some(result)),
                    Ok(Err(e)) => (Err(e.to_string()), None),
                    Err(panic) => {
                        let msg = panic
                            .downcast_ref::<&str>()
                            .map(|s| (*s).to_string())
                            .or_else(|| panic.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "panic".into());
                        (Err(format!("panicked: {msg}")), None)
                    }
                };
                (
                    CellStatus {
                        strategy: spec.name.clone(),
                        seed,
                        outcome: status,
                    },
                    result,
                )
            })
            .collect()
    });

    let mut statuses = Vec::with_capacity(outcomes.len());
    let mut results = Vec::new();
    for (status, result) in outcomes {
        statuses.push(status);
        if let Some(r) = result {
            results.push(r);
        }
    }
    let scenario_name = scenarios
        .first()
        .map(|s| s.name.clone())
        .unwrap_or_default();
    let boundaries = scenarios
        .first()
        .map(|s| s.schedule.boundaries().to_vec())
        .unwrap_or_default();
    Ok(GridOutcome {
        results,
        statuses,
        boundaries,
        scenario_name,
    })
}

/// Write the per-run trace CSV and kappa-matrix JSON files under
/// `out_dir/runs/`.
pub fn persist_runs(outcome: &GridOutcome, out_dir: &Path) -> Result<(), CliError> {
    let runs_dir = out_dir.join("runs");
    fs::create_dir_all(&runs_dir)?;
    for cell in &outcome.results {
        let trace_path = runs_dir.join(format!("trace_{}_{}.csv", cell.strategy, cell.seed));
        let mut out = String::new();
        out.push_str(&format!("# schema_version={SCHEMA_VERSION}\n"));
        out.push_str("step,concept,y_true,y_pred,kappa\n");
        for s in &cell.trace.steps {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.step, s.concept, s.y_true, s.y_pred, s.kappa
            ));
        }
        fs::write(trace_path, out)?;

        let matrix_path = runs_dir.join(format!("clmatrix_{}_{}.json", cell.strategy, cell.seed));
        fs::write(matrix_path, serde_json::to_string_pretty(cell)?)?;
    }
    let mut status = String::new();
    status.push_str(&format!("# schema_version={SCHEMA_VERSION}\n"));
    status.push_str("strategy,seed,status,message\n");
    for s in &outcome.statuses {
        match &s.outcome {
            Ok(()) => status.push_str(&format!("{},{},ok,\n", s.strategy, s.seed)),
            Err(msg) => status.push_str(&format!(
                "{},{},error,{}\n",
                s.strategy,
                s.seed,
                msg.replace(['\n', ','], " ")
            )),
        }
    }
    fs::write(out_dir.join("run_status.csv"), status)?;
    Ok(())
}
