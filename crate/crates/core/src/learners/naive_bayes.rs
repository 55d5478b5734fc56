use crate::error::Result;
use crate::learners::{argmax_lowest_tie, check_dim, Model, Strategy};
use crate::stream::LabeledExample;

/// Floor applied to feature variances so constant features keep a finite
/// Gaussian likelihood.
const VARIANCE_FLOOR: f64 = 1e-6;

/// Incremental Gaussian naive Bayes: per-class counts plus Welford running
/// mean/variance per feature.
#[derive(Debug, Clone)]
pub struct GaussianNb {
    n_classes: usize,
    n_features: usize,
    counts: Vec<u64>,
    /// mean[class][feature]
    means: Vec<Vec<f64>>,
    /// Sum of squared deviations from the running mean, per class/feature.
    m2: Vec<Vec<f64>>,
}

impl GaussianNb {
    pub fn new(n_classes: usize, n_features: usize) -> Self {
        Self {
            n_classes,
            n_features,
            counts: vec![0; n_classes],
            means: vec![vec![0.0; n_features]; n_classes],
            m2: vec![vec![0.0; n_features]; n_classes],
        }
    }

    pub fn class_count(&self, class: usize) -> u64 {
        self.counts[class]
    }

    /// Running mean and sample-free (population) variance of a feature
    /// within a class, floored for prediction.
    pub fn feature_stats(&self, class: usize, feature: usize) -> (f64, f64) {
        let n = self.counts[class];
        let var = if n > 0 {
            self.m2[class][feature] / n as f64
        } else {
            0.0
        };
        (self.means[class][feature], var)
    }

    pub fn learn_one(&mut self, example: &LabeledExample) -> Result<()> {
        check_dim(self.n_features, &example.features)?;
        let c = example.label;
        self.counts[c] += 1;
        let n = self.counts[c] as f64;
        for (f, &x) in example.features.iter().enumerate() {
            let delta = x - self.means[c][f];
            self.means[c][f] += delta / n;
            self.m2[c][f] += delta * (x - self.means[c][f]);
        }
        Ok(())
    }

    fn log_joint(&self, class: usize, features: &[f64]) -> f64 {
        let total: u64 = self.counts.iter().sum();
        let n = self.counts[class];
        if n == 0 {
            return f64::NEG_INFINITY;
        }
        let mut score = (n as f64 / total as f64).ln();
        for (f, &x) in features.iter().enumerate() {
            let (mean, var) = self.feature_stats(class, f);
            let var = var.max(VARIANCE_FLOOR);
            let d = x - mean;
            score += -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + d * d / var);
        }
        score
    }
}

impl Model for GaussianNb {
    fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax_lowest_tie(&self.scores(features)?))
    }

    fn scores(&self, features: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_features, features)?;
        if self.counts.iter().all(|&c| c == 0) {
            // Cold start: class 0 by convention.
            return Ok(vec![0.0; self.n_classes]);
        }
        Ok((0..self.n_classes)
            .map(|c| self.log_joint(c, features))
            .collect())
    }
}

impl Strategy for GaussianNb {
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
        "nb"
    }
}
