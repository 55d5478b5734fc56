use std::collections::VecDeque;

use crate::error::{CoreError, Result};

/// A bucket of the exponential histogram: `count` items summing to `sum`.
/// Buckets in row `r` hold exactly `2^r` items.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Bucket {
    sum: f64,
    count: u64,
}

/// Adaptive windowing detector over values in [0, 1].
///
/// Maintains a variable-length window as rows of merged buckets (at most
/// `max_buckets` per row before the two oldest merge into the next row) and,
/// on every insertion, checks all bucket boundaries for a mean difference
/// exceeding a Hoeffding-style cut threshold. When a cut fires, the oldest
/// buckets are dropped until no boundary violates the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Adwin {
    delta: f64,
    max_buckets: usize,
    /// rows[r] holds buckets of 2^r items, oldest first within a row.
    rows: Vec<VecDeque<Bucket>>,
    total_sum: f64,
    total_count: u64,
}

impl Default for Adwin {
    fn default() -> Self {
        Self::new(0.002)
    }
}

impl Adwin {
    pub fn new(delta: f64) -> Self {
        Self {
            delta,
            max_buckets: 5,
            rows: Vec::new(),
            total_sum: 0.0,
            total_count: 0,
        }
    }

    /// Current window mean and length.
    pub fn estimate(&self) -> Result<(f64, u64)> {
        if self.total_count == 0 {
            return Err(CoreError::EmptyWindow);
        }
        Ok((self.total_sum / self.total_count as f64, self.total_count))
    }

    pub fn window_len(&self) -> u64 {
        self.total_count
    }

    /// Number of live bucket rows (grows with the log of the window length).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Insert an observation; returns true when a drift was detected (the
    /// window shrank).
    pub fn insert(&mut self, x: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&x) {
            return Err(CoreError::InvalidArgument(format!(
                "adwin input must lie in [0, 1], got {x}"
            )));
        }
        if self.rows.is_empty() {
            self.rows.push(VecDeque::new());
        }
        self.rows[0].push_back(Bucket { sum: x, count: 1 });
        self.total_sum += x;
        self.total_count += 1;
        self.compress();

        let mut drift = false;
        while self.find_cut() {
            self.drop_oldest_bucket();
            drift = true;
        }
        Ok(drift)
    }

    /// Merge the two oldest buckets of any overfull row into the next row.
    fn compress(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.rows[r].len() > self.max_buckets {
                let a = self.rows[r].pop_front().expect("len > max_buckets >= 1");
                let b = self.rows[r].pop_front().expect("len > max_buckets >= 1");
                if r + 1 == self.rows.len() {
                    self.rows.push(VecDeque::new());
                }
                // Rows stay oldest-first: a bucket merged now is newer than
                // everything already promoted to the next row.
                self.rows[r + 1].push_back(Bucket {
                    sum: a.sum + b.sum,
                    count: a.count + b.count,
                });
            }
            r += 1;
        }
    }

    /// Scan boundaries oldest-to-newest for a mean split larger than the cut
    /// threshold.
    fn find_cut(&self) -> bool {
        let n = self.total_count as f64;
        if n < 2.0 {
            return false;
        }
        // delta' spreads the confidence budget over the window length.
        let log_term = (4.0 * n / self.delta).ln();
        let mut n0 = 0.0;
        let mut sum0 = 0.0;
        for bucket in self.iter_oldest_first() {
            n0 += bucket.count as f64;
            sum0 += bucket.sum;
            let n1 = n - n0;
            if n1 < 1.0 {
                break;
            }
            let m = 1.0 / (1.0 / n0 + 1.0 / n1);
            let eps_cut = (log_term / (2.0 * m)).sqrt();
            let mean0 = sum0 / n0;
            let mean1 = (self.total_sum - sum0) / n1;
            if (mean0 - mean1).abs() > eps_cut {
                return true;
            }
        }
        false
    }

    fn drop_oldest_bucket(&mut self) {
        for r in (0..self.rows.len()).rev() {
            if let Some(b) = self.rows[r].pop_front() {
                self.total_sum -= b.sum;
                self.total_count -= b.count;
                break;
            }
        }
        while self
            .rows
            .last()
            .is_some_and(|row| row.is_empty())
        {
            self.rows.pop();
        }
    }

    /// Buckets from the oldest (highest row, front) to the newest.
    fn iter_oldest_first(&self) -> impl Iterator<Item = &Bucket> {
        self.rows.iter().rev().flat_map(|row| row.iter())
    }

    /// Size of the largest bucket currently in the window, in items.
    pub fn coarsest_bucket(&self) -> u64 {
        self.iter_oldest_first()
            .map(|b| b.count)
            .max()
            .unwrap_or(0)
    }
}
