use crate::error::{CoreError, Result};
use crate::eval::confusion::ConfusionMatrix;
use crate::learners::Model;
use crate::stream::LabeledExample;

/// Score backend for the continual-learning matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Cohen's kappa (the reported default).
    Kappa,
    /// Plain accuracy.
    Accuracy,
}

/// Lower-triangular score matrix `K[i][j]` for `j <= i`: the checkpoint
/// stored after concept `i`, evaluated on the test set of concept `j`.
/// Indices here are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaMatrix {
    n: usize,
    /// Row-major lower triangle: (0,0), (1,0), (1,1), (2,0), ...
    values: Vec<f64>,
}

impl KappaMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(CoreError::InvalidArgument(format!(
                    "row {i} must have {} entries, got {}",
                    i + 1,
                    row.len()
                )));
            }
        }
        Ok(Self {
            n,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n_concepts(&self) -> usize {
        self.n
    }

    pub fn entry_count(&self) -> usize {
        self.values.len()
    }

    /// K[i][j] with 0-based `j <= i < n`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(j <= i && i < self.n, "index ({i},{j}) outside the triangle");
        self.values[i * (i + 1) / 2 + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..=i).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Score every checkpoint against every earlier-or-equal test set.
pub fn cl_matrix(
    checkpoints: &[Box<dyn Model + Send>],
    test_sets: &[&[LabeledExample]],
    metric: Metric,
    n_classes: usize,
) -> Result<KappaMatrix> {
    if checkpoints.len() != test_sets.len() {
        return Err(CoreError::InvalidArgument(format!(
            "{} checkpoints vs {} test sets",
            checkpoints.len(),
            test_sets.len()
        )));
    }
    let mut rows = Vec::with_capacity(checkpoints.len());
    for (i, checkpoint) in checkpoints.iter().enumerate() {
        let mut row = Vec::with_capacity(i + 1);
        for test in &test_sets[..=i] {
            let mut cm = ConfusionMatrix::new(n_classes);
            for ex in test.iter() {
                cm.record(ex.label, checkpoint.predict(&ex.features)?);
            }
            row.push(match metric {
                Metric::Kappa => cm.kappa()?,
                Metric::Accuracy => cm.accuracy()?,
            });
        }
        rows.push(row);
    }
    KappaMatrix::from_rows(rows)
}

/// Average of the full lower triangle: `sum K[i][j] / (N (N + 1) / 2)`.
pub fn k_avg(matrix: &KappaMatrix) -> Result<f64> {
    let n = matrix.n_concepts();
    if n == 0 {
        return Err(CoreError::InvalidArgument("empty matrix".into()));
    }
    let expected = n * (n + 1) / 2;
    if matrix.entry_count() != expected {
        return Err(CoreError::InvalidArgument(format!(
            "matrix holds {} entries, expected {expected}",
            matrix.entry_count()
        )));
    }
    Ok(matrix.values.iter().sum::<f64>() / expected as f64)
}

/// Backward transfer: mean of `K[i][j] - K[j][j]` over the strict lower
/// triangle, `sum / (N (N - 1) / 2)`. Negative values measure forgetting.
pub fn bwt(matrix: &KappaMatrix) -> Result<f64> {
    let n = matrix.n_concepts();
    if n < 2 {
        return Err(CoreError::UndefinedMetric(
            "backward transfer needs at least two concepts".into(),
        ));
    }
    let mut sum = 0.0;
    for i in 1..n {
        for j in 0..i {
            sum += matrix.get(i, j) - matrix.get(j, j);
        }
    }
    Ok(sum / (n * (n - 1) / 2) as f64)
}

/// Mean score of the final checkpoint across all test sets (the ACC metric
/// when the matrix was built with the accuracy backend).
pub fn acc_final(matrix: &KappaMatrix) -> Result<f64> {
    let n = matrix.n_concepts();
    if n == 0 {
        return Err(CoreError::InvalidArgument("empty matrix".into()));
    }
    let last = n - 1;
    Ok((0..n).map(|j| matrix.get(last, j)).sum::<f64>() / n as f64)
}
