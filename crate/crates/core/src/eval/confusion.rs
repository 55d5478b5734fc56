use crate::error::{CoreError, Result};

/// C x C contingency table of (truth, prediction) counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    n_classes: usize,
    /// counts[truth * n_classes + pred]
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        Self {
            n_classes,
            counts: vec![0; n_classes * n_classes],
        }
    }

    pub fn from_counts(rows: &[&[u64]]) -> Self {
        let n = rows.len();
        let mut cm = Self::new(n);
        for (t, row) in rows.iter().enumerate() {
            for (p, &c) in row.iter().enumerate() {
                cm.counts[t * n + p] = c;
            }
        }
        cm
    }

    pub fn record(&mut self, truth: usize, pred: usize) {
        self.counts[truth * self.n_classes + pred] += 1;
    }

    /// Remove a previously recorded pair (window eviction).
    pub fn unrecord(&mut self, truth: usize, pred: usize) {
        let c = &mut self.counts[truth * self.n_classes + pred];
        debug_assert!(*c > 0, "unrecord of a pair that was never recorded");
        *c -= 1;
    }

    pub fn clear(&mut self) {
        self.counts.fill(0);
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, truth: usize, pred: usize) -> u64 {
        self.counts[truth * self.n_classes + pred]
    }

    /// Fraction of agreeing pairs.
    pub fn accuracy(&self) -> Result<f64> {
        let total = self.total();
        if total == 0 {
            return Err(CoreError::UndefinedMetric(
                "accuracy of an empty confusion matrix".into(),
            ));
        }
        let agree: u64 = (0..self.n_classes).map(|c| self.get(c, c)).sum();
        Ok(agree as f64 / total as f64)
    }

    /// Cohen's kappa `(p_o - p_e) / (1 - p_e)`; returns 0 when the expected
    /// agreement is 1 (constant truth scored by a constant predictor).
    pub fn kappa(&self) -> Result<f64> {
        let total = self.total();
        if total == 0 {
            return Err(CoreError::UndefinedMetric(
                "kappa of an empty confusion matrix".into(),
            ));
        }
        let total = total as f64;
        let p_o = (0..self.n_classes)
            .map(|c| self.get(c, c) as f64)
            .sum::<f64>()
            / total;
        let mut p_e = 0.0;
        for c in 0..self.n_classes {
            let row: u64 = (0..self.n_classes).map(|p| self.get(c, p)).sum();
            let col: u64 = (0..self.n_classes).map(|t| self.get(t, c)).sum();
            p_e += (row as f64 / total) * (col as f64 / total);
        }
        if (1.0 - p_e).abs() < 1e-12 {
            return Ok(0.0);
        }
        Ok((p_o - p_e) / (1.0 - p_e))
    }
}

/// Cohen's kappa of a confusion matrix.
pub fn kappa(confusion: &ConfusionMatrix) -> Result<f64> {
    confusion.kappa()
}
