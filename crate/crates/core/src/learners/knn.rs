use std::collections::VecDeque;

use crate::error::Result;
use crate::learners::{argmax_lowest_tie, check_dim, Model, Strategy};
use crate::stream::LabeledExample;

/// k-nearest-neighbours over a bounded FIFO window of recent examples.
#[derive(Debug, Clone)]
pub struct KnnWindow {
    n_classes: usize,
    n_features: usize,
    k: usize,
    capacity: usize,
    window: VecDeque<(Vec<f64>, usize)>,
}

impl KnnWindow {
    /// Defaults: k = 5 over a window of 500.
    pub fn new(n_classes: usize, n_features: usize) -> Self {
        Self::with_params(n_classes, n_features, 5, 500)
    }

    pub fn with_params(n_classes: usize, n_features: usize, k: usize, capacity: usize) -> Self {
        Self {
            n_classes,
            n_features,
            k,
            capacity,
            window: VecDeque::with_capacity(capacity),
        }
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn contents(&self) -> impl Iterator<Item = &(Vec<f64>, usize)> {
        self.window.iter()
    }

    pub fn learn_one(&mut self, example: &LabeledExample) -> Result<()> {
        check_dim(self.n_features, &example.features)?;
        if self.capacity == 0 {
            return Ok(());
        }
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window
            .push_back((example.features.clone(), example.label));
        Ok(())
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Model for KnnWindow {
    fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax_lowest_tie(&self.scores(features)?))
    }

    fn scores(&self, features: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_features, features)?;
        let mut votes = vec![0.0; self.n_classes];
        if self.window.is_empty() {
            return Ok(votes);
        }
        // Distance ties resolve toward older window entries (stable sort).
        let mut ranked: Vec<(f64, usize)> = self
            .window
            .iter()
            .map(|(x, label)| (squared_distance(features, x), *label))
            .collect();
        ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));
        for (_, label) in ranked.iter().take(self.k) {
            votes[*label] += 1.0;
        }
        Ok(votes)
    }
}

impl Strategy for KnnWindow {
    fn learn(&mut self, batch: &[LabeledExample]) -> Result<()> {
        for ex in batch {
            self.learn_one(ex)?;
        }
        Ok(())
    }

    fn snapshot(&self) -> Box<dyn Model + Send> {
        Box::new(self.clone())
    }

    fn preferred_batch(&self) -> usize {
        1
    }

    fn name(&self) -> &'static str {
        "knn"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(features: Vec<f64>, label: usize) -> LabeledExample {
        LabeledExample::new(features, label, 0)
    }

    #[test]
    fn fifo_eviction_keeps_newest() {
        let mut knn = KnnWindow::with_params(2, 1, 1, 3);
        for i in 1..=4 {
            knn.learn_one(&ex(vec![i as f64], i % 2)).unwrap();
        }
        let kept: Vec<f64> = knn.contents().map(|(x, _)| x[0]).collect();
        assert_eq!(kept, vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn exact_match_with_k1() {
        let mut knn = KnnWindow::with_params(2, 7, 1, 500);
        let pattern = vec![0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        knn.learn_one(&ex(pattern.clone(), 1)).unwrap();
        assert_eq!(knn.predict(&pattern).unwrap(), 1);
    }

    #[test]
    fn untrained_predicts_class_zero() {
        let knn = KnnWindow::new(2, 3);
        assert_eq!(knn.predict(&[1.0, 2.0, 3.0]).unwrap(), 0);
    }

    #[test]
    fn majority_among_k_nearest() {
        let mut knn = KnnWindow::with_params(2, 1, 3, 500);
        knn.learn_one(&ex(vec![0.0], 0)).unwrap();
        knn.learn_one(&ex(vec![0.1], 0)).unwrap();
        knn.learn_one(&ex(vec![0.2], 1)).unwrap();
        knn.learn_one(&ex(vec![9.0], 1)).unwrap();
        assert_eq!(knn.predict(&[0.05]).unwrap(), 0);
    }

    #[test]
    fn zero_capacity_stays_empty() {
        let mut knn = KnnWindow::with_params(2, 1, 1, 0);
        knn.learn_one(&ex(vec![1.0], 1)).unwrap();
        assert!(knn.is_empty());
        assert_eq!(knn.predict(&[1.0]).unwrap(), 0);
    }
}
