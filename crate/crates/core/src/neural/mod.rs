//! From-scratch one-hidden-layer network with SGD momentum, wrapped by the
//! online continual-learning strategies (naive fine-tuning, experience
//! replay, gradient projection).

mod agem;
mod mlp;
mod optimizer;
mod replay;
mod strategy;

pub use agem::agem_project;
pub use mlp::{mlp_backward, mlp_forward, MlpParams};
pub use optimizer::{sgd_momentum_step, OptimizerState};
pub use replay::ReplayMemory;
pub use strategy::{ClStrategy, MlpCheckpoint, NeuralConfig, NeuralStrategy};
