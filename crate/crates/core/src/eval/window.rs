use std::collections::VecDeque;

use crate::error::Result;
use crate::eval::confusion::ConfusionMatrix;

/// Rolling prequential window of (truth, prediction) pairs with a bounded
/// capacity. A drift boundary clears the window before the insert, so the
/// first 1k points after a drift are scored from the drift onwards only.
#[derive(Debug, Clone)]
pub struct RollingWindow {
    capacity: usize,
    pairs: VecDeque<(usize, usize)>,
    confusion: ConfusionMatrix,
}

impl RollingWindow {
    pub fn new(capacity: usize, n_classes: usize) -> Self {
        Self {
            capacity,
            pairs: VecDeque::with_capacity(capacity),
            confusion: ConfusionMatrix::new(n_classes),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contents(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.pairs.iter()
    }

    /// Insert a pair (clearing first when `is_drift_boundary`) and return
    /// the kappa over the current window contents.
    pub fn update(&mut self, y_true: usize, y_pred: usize, is_drift_boundary: bool) -> Result<f64> {
        if is_drift_boundary {
            self.pairs.clear();
            self.confusion.clear();
        }
        if self.pairs.len() == self.capacity {
            let (t, p) = self.pairs.pop_front().expect("window is non-empty");
            self.confusion.unrecord(t, p);
        }
        self.pairs.push_back((y_true, y_pred));
        self.confusion.record(y_true, y_pred);
        self.confusion.kappa()
    }

    /// Kappa over the current contents, or an error when empty.
    pub fn kappa(&self) -> Result<f64> {
        self.confusion.kappa()
    }
}
