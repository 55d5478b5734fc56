use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::learners::{argmax_lowest_tie, Model, Strategy};
use crate::neural::agem::agem_project;
use crate::neural::mlp::{mlp_backward, MlpParams};
use crate::neural::optimizer::{sgd_momentum_step, OptimizerState};
use crate::neural::replay::ReplayMemory;
use crate::stream::LabeledExample;

/// Which continual-learning wrapper drives the network updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStrategy {
    /// Plain fine-tuning on the incoming minibatch.
    Naive,
    /// Experience replay: one step on the minibatch concatenated with a
    /// memory sample of equal size.
    Replay,
    /// Gradient projection against a memory reference gradient.
    Agem,
}

impl ClStrategy {
    pub fn name(self) -> &'static str {
        match self {
            ClStrategy::Naive => "naive",
            ClStrategy::Replay => "er",
            ClStrategy::Agem => "agem",
        }
    }
}

/// Hyperparameters of the neural strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralConfig {
    pub hidden: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub memory_capacity: usize,
    pub replay_batch: usize,
}

impl Default for NeuralConfig {
    fn default() -> Self {
        Self {
            hidden: 512,
            learning_rate: 0.001,
            momentum: 0.9,
            memory_capacity: 500,
            replay_batch: 10,
        }
    }
}

/// A one-hidden-layer network wrapped by an OCL strategy. Learning is
/// single-pass: every `learn` call performs exactly one optimizer step.
#[derive(Debug, Clone)]
pub struct NeuralStrategy {
    kind: ClStrategy,
    params: MlpParams,
    opt: OptimizerState,
    memory: ReplayMemory,
    replay_batch: usize,
    rng: ChaCha8Rng,
}

impl NeuralStrategy {
    pub fn new(kind: ClStrategy, input_dim: usize, n_classes: usize, seed: u64) -> Self {
        Self::with_config(kind, input_dim, n_classes, NeuralConfig::default(), seed)
    }

    pub fn with_config(
        kind: ClStrategy,
        input_dim: usize,
        n_classes: usize,
        config: NeuralConfig,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = MlpParams::init(input_dim, config.hidden, n_classes, &mut rng);
        let opt = OptimizerState::with_params(&params, config.learning_rate, config.momentum);
        Self {
            kind,
            params,
            opt,
            memory: ReplayMemory::new(config.memory_capacity),
            replay_batch: config.replay_batch,
            rng,
        }
    }

    pub fn kind(&self) -> ClStrategy {
        self.kind
    }

    pub fn params(&self) -> &MlpParams {
        &self.params
    }

    pub fn memory_len(&self) -> usize {
        self.memory.len()
    }

    /// One strategy step on a minibatch. With an empty memory, replay and
    /// projection degrade to the naive update.
    pub fn train_step(&mut self, batch: &[LabeledExample]) -> Result<()> {
        if batch.is_empty() {
            return Err(CoreError::InvalidArgument("empty minibatch".into()));
        }
        let uses_memory = !matches!(self.kind, ClStrategy::Naive);
        let grads = match self.kind {
            ClStrategy::Naive => mlp_backward(&self.params, batch)?.0,
            ClStrategy::Replay => {
                if self.memory.is_empty() {
                    mlp_backward(&self.params, batch)?.0
                } else {
                    let replayed = self.memory.sample(self.replay_batch, &mut self.rng);
                    let combined: Vec<LabeledExample> =
                        batch.iter().chain(&replayed).cloned().collect();
                    mlp_backward(&self.params, &combined)?.0
                }
            }
            ClStrategy::Agem => {
                let (grads, _) = mlp_backward(&self.params, batch)?;
                if self.memory.is_empty() {
                    grads
                } else {
                    let reference = self.memory.sample(self.replay_batch, &mut self.rng);
                    let (ref_grads, _) = mlp_backward(&self.params, &reference)?;
                    let projected =
                        agem_project(&grads.flatten(), &ref_grads.flatten())?;
                    grads.from_flat(&projected)?
                }
            }
        };
        sgd_momentum_step(&mut self.params, &mut self.opt, &grads)?;
        if uses_memory {
            self.memory.reservoir_update(batch, &mut self.rng);
        }
        Ok(())
    }
}

/// Frozen copy of the network parameters; replay memory is excluded from
/// inference.
#[derive(Debug, Clone)]
pub struct MlpCheckpoint {
    params: MlpParams,
}

impl Model for MlpCheckpoint {
    fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax_lowest_tie(&self.params.logits(features)?))
    }

    fn scores(&self, features: &[f64]) -> Result<Vec<f64>> {
        self.params.logits(features)
    }
}

impl Model for NeuralStrategy {
    fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax_lowest_tie(&self.params.logits(features)?))
    }

    fn scores(&self, features: &[f64]) -> Result<Vec<f64>> {
        self.params.logits(features)
    }
}

impl Strategy for NeuralStrategy {
    fn learn(&mut self, batch: &[LabeledExample]) -> Result<()> {
        self.train_step(batch)
    }

    fn snapshot(&self) -> Box<dyn Model + Send> {
        Box::new(MlpCheckpoint {
            params: self.params.clone(),
        })
    }

    fn preferred_batch(&self) -> usize {
        10
    }

    fn name(&self) -> &'static str {
        self.kind.name()
    }
}
