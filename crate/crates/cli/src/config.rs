use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Scenario family to benchmark on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Virtual,
    Real,
    Csv,
}

fn default_examples() -> usize {
    2000
}
fn default_test() -> usize {
    500
}
fn default_noise() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default = "default_examples")]
    pub examples_per_concept: usize,
    #[serde(default = "default_test")]
    pub test_per_concept: usize,
    #[serde(default = "default_noise")]
    pub noise: f64,
    /// CSV stream to replay (kind = csv only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Fixed task order for the real scenario; defaults to a per-seed
    /// shuffle of the five built-in tasks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task_order: Option<Vec<String>>,
}

fn default_window() -> usize {
    1000
}
fn default_classical_batch() -> usize {
    1
}
fn default_neural_batch() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_classical_batch")]
    pub classical_batch: usize,
    #[serde(default = "default_neural_batch")]
    pub neural_batch: usize,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        Self {
            window: default_window(),
            classical_batch: default_classical_batch(),
            neural_batch: default_neural_batch(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Scenario seeds; one grid cell per (strategy, seed).
    pub seeds: Vec<u64>,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    /// Parallelism when neither --jobs nor SCLBENCH_JOBS is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_master_seed() -> u64 {
    42
}

/// One benchmarked strategy plus optional hyperparameter overrides. Fields
/// that do not apply to the named strategy are rejected at validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub name: String,
    // Neural strategies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay_batch: Option<usize>,
    // Hoeffding tree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grace: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_confidence: Option<f64>,
    // Forest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trees: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member_grace: Option<u64>,
    // kNN.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knn_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knn_window: Option<usize>,
}

pub const STRATEGY_NAMES: [&str; 7] = ["nb", "hoeffding", "knn", "forest", "naive", "er", "agem"];

const NEURAL: [&str; 3] = ["naive", "er", "agem"];

impl StrategyConfig {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            hidden: None,
            learning_rate: None,
            momentum: None,
            memory: None,
            replay_batch: None,
            grace: None,
            split_confidence: None,
            trees: None,
            lambda: None,
            member_grace: None,
            knn_k: None,
            knn_window: None,
        }
    }

    pub fn is_neural(&self) -> bool {
        NEURAL.contains(&self.name.as_str())
    }

    fn validate(&self) -> Result<(), CliError> {
        if !STRATEGY_NAMES.contains(&self.name.as_str()) {
            return Err(CliError::Config(format!(
                "unknown strategy `{}`; expected one of {STRATEGY_NAMES:?}",
                self.name
            )));
        }
        let reject = |field: &str, set: bool| -> Result<(), CliError> {
            if set {
                Err(CliError::Config(format!(
                    "key `{field}` does not apply to strategy `{}`",
                    self.name
                )))
            } else {
                Ok(())
            }
        };
        if !self.is_neural() {
            reject("hidden", self.hidden.is_some())?;
            reject("learning_rate", self.learning_rate.is_some())?;
            reject("momentum", self.momentum.is_some())?;
            reject("memory", self.memory.is_some())?;
            reject("replay_batch", self.replay_batch.is_some())?;
        }
        if self.name != "hoeffding" {
            reject("grace", self.grace.is_some())?;
            reject("split_confidence", self.split_confidence.is_some())?;
        }
        if self.name != "forest" {
            reject("trees", self.trees.is_some())?;
            reject("lambda", self.lambda.is_some())?;
            reject("member_grace", self.member_grace.is_some())?;
        }
        if self.name != "knn" {
            reject("knn_k", self.knn_k.is_some())?;
            reject("knn_window", self.knn_window.is_some())?;
        }
        Ok(())
    }
}

/// Full experiment description: one scenario, a strategy list, and the
/// evaluation/run parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    pub run: RunConfig,
    pub strategies: Vec<StrategyConfig>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.run.seeds.is_empty() {
            return Err(CliError::Config("run.seeds must list at least one seed".into()));
        }
        if self.strategies.is_empty() {
            return Err(CliError::Config("at least one [[strategies]] entry is required".into()));
        }
        if self.evaluation.window == 0 {
            return Err(CliError::Config("evaluation.window must be >= 1".into()));
        }
        if self.evaluation.classical_batch == 0 || self.evaluation.neural_batch == 0 {
            return Err(CliError::Config("batch sizes must be >= 1".into()));
        }
        if !(0.0..0.5).contains(&self.scenario.noise) {
            return Err(CliError::Config(format!(
                "scenario.noise must lie in [0, 0.5), got {}",
                self.scenario.noise
            )));
        }
        match self.scenario.kind {
            ScenarioKind::Csv => {
                if self.scenario.path.is_none() {
                    return Err(CliError::Config(
                        "scenario.path is required when kind = \"csv\"".into(),
                    ));
                }
            }
            ScenarioKind::Virtual | ScenarioKind::Real => {
                if self.scenario.path.is_some() {
                    return Err(CliError::Config(
                        "scenario.path only applies to kind = \"csv\"".into(),
                    ));
                }
                if self.scenario.examples_per_concept == 0 || self.scenario.test_per_concept == 0 {
                    return Err(CliError::Config("concept sizes must be >= 1".into()));
                }
            }
        }
        if self.scenario.task_order.is_some() && self.scenario.kind != ScenarioKind::Real {
            return Err(CliError::Config(
                "scenario.task_order only applies to kind = \"real\"".into(),
            ));
        }
        if let Some(order) = &self.scenario.task_order {
            let mut names: Vec<&str> = order.iter().map(String::as_str).collect();
            names.sort_unstable();
            names.dedup();
            if order.len() != 5 || names.len() != 5 {
                return Err(CliError::Config(
                    "scenario.task_order must be a permutation of the 5 built-in tasks".into(),
                ));
            }
            for name in order {
                sclbench_core::stream::TaskId::from_name(name)
                    .map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        let mut seen = std::collections::HashSet::new();
        for s in &self.strategies {
            s.validate()?;
            if !seen.insert(&s.name) {
                return Err(CliError::Config(format!(
                    "strategy `{}` listed more than once",
                    s.name
                )));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// Parse and validate a config file. Unknown keys, missing keys, and type
/// mismatches are fatal, with the offending key and line reported by the
/// TOML deserializer.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&raw)
}

pub fn parse_config_str(raw: &str) -> Result<ExperimentConfig, CliError> {
    let config: ExperimentConfig =
        toml::from_str(raw).map_err(|e| CliError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [scenario]
        kind = "virtual"

        [run]
        seeds = [0, 1]

        [[strategies]]
        name = "nb"
    "#;

    #[test]
    fn minimal_config_fills_defaults() {
        let config = parse_config_str(MINIMAL).unwrap();
        assert_eq!(config.evaluation.window, 1000);
        assert_eq!(config.evaluation.classical_batch, 1);
        assert_eq!(config.evaluation.neural_batch, 10);
        assert_eq!(config.scenario.examples_per_concept, 2000);
        assert_eq!(config.scenario.test_per_concept, 500);
        assert!((config.scenario.noise - 0.05).abs() < 1e-12);
        assert_eq!(config.run.master_seed, 42);
    }

    #[test]
    fn unknown_key_is_fatal_and_named() {
        let raw = MINIMAL.replace("[run]", "[evaluation]\nwindw = 100\n\n[run]");
        let err = parse_config_str(&raw).unwrap_err().to_string();
        assert!(err.contains("windw"), "error does not name the key: {err}");
    }

    #[test]
    fn type_mismatch_reports_the_key() {
        let raw = MINIMAL.replace("seeds = [0, 1]", "seeds = \"zero\"");
        let err = parse_config_str(&raw).unwrap_err().to_string();
        assert!(err.contains("seeds") || err.contains("line"), "{err}");
    }

    #[test]
    fn round_trip_is_identity() {
        let config = parse_config_str(MINIMAL).unwrap();
        let reparsed = parse_config_str(&config.to_toml()).unwrap();
        assert_eq!(config, reparsed);
    }

    #[test]
    fn empty_seed_or_strategy_lists_are_rejected() {
        assert!(parse_config_str(&MINIMAL.replace("seeds = [0, 1]", "seeds = []")).is_err());
        let raw = MINIMAL.replace("[[strategies]]\n        name = \"nb\"", "");
        assert!(parse_config_str(&raw).is_err());
    }

    #[test]
    fn inapplicable_hyperparameters_are_rejected() {
        let raw = MINIMAL.replace("name = \"nb\"", "name = \"nb\"\ntrees = 10");
        let err = parse_config_str(&raw).unwrap_err().to_string();
        assert!(err.contains("trees"), "{err}");
    }

    #[test]
    fn csv_kind_requires_a_path() {
        let raw = MINIMAL.replace("kind = \"virtual\"", "kind = \"csv\"");
        assert!(parse_config_str(&raw).is_err());
    }

    #[test]
    fn task_order_is_validated() {
        let raw = MINIMAL.replace(
            "kind = \"virtual\"",
            "kind = \"real\"\ntask_order = [\"parity\", \"gt4\", \"mult3\", \"prime\", \"parity\"]",
        );
        assert!(parse_config_str(&raw).is_err());
        let ok = MINIMAL.replace(
            "kind = \"virtual\"",
            "kind = \"real\"\ntask_order = [\"parity\", \"gt4\", \"mult3\", \"prime\", \"range25\"]",
        );
        assert!(parse_config_str(&ok).is_ok());
    }
}
