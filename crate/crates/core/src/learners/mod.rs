//! Single-pass streaming classifiers sharing one learn/predict/snapshot
//! contract, consumed by the prequential evaluation loop.

mod forest;
mod hoeffding;
mod knn;
mod naive_bayes;

pub use forest::AdaptiveForest;
pub use hoeffding::{hoeffding_bound, HoeffdingTree};
pub use knn::KnnWindow;
pub use naive_bayes::GaussianNb;

use crate::error::{CoreError, Result};
use crate::stream::LabeledExample;

/// Prediction-only surface shared by live learners and frozen checkpoints.
pub trait Model {
    /// Predicted class index; ties break toward the lowest class, and an
    /// untrained model predicts class 0.
    fn predict(&self, features: &[f64]) -> Result<usize>;

    /// Per-class scores backing `predict` (interpretation is per learner:
    /// log-joints, counts, or votes).
    fn scores(&self, features: &[f64]) -> Result<Vec<f64>>;
}

/// A trainable strategy: a classical learner or a neural OCL wrapper.
pub trait Strategy: Model {
    /// Consume one minibatch in a single gradient/update step. Classical
    /// learners receive batches of one example.
    fn learn(&mut self, batch: &[LabeledExample]) -> Result<()>;

    /// Deep, independent copy of the predictive state. Later training on
    /// the live strategy never changes the snapshot's predictions.
    fn snapshot(&self) -> Box<dyn Model + Send>;

    /// Minibatch size this strategy is evaluated with (1 classical, 10 OCL).
    fn preferred_batch(&self) -> usize;

    fn name(&self) -> &'static str;
}

pub(crate) fn check_dim(expected: usize, features: &[f64]) -> Result<()> {
    if features.len() != expected {
        return Err(CoreError::InvalidArgument(format!(
            "feature dimension mismatch: expected {expected}, got {}",
            features.len()
        )));
    }
    Ok(())
}

/// Index of the maximum score, breaking ties toward the lowest class.
pub(crate) fn argmax_lowest_tie(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}
