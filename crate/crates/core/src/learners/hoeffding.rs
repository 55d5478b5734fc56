use crate::error::{CoreError, Result};
use crate::learners::{argmax_lowest_tie, check_dim, Model, Strategy};
use crate::stream::LabeledExample;

/// Hoeffding confidence radius `sqrt(R^2 ln(1/delta) / (2 n))`.
pub fn hoeffding_bound(range: f64, delta: f64, n: u64) -> Result<f64> {
    if range < 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "range must be non-negative, got {range}"
        )));
    }
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if n == 0 {
        return Err(CoreError::InvalidArgument("n must be >= 1".into()));
    }
    Ok((range * range * (1.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

/// Per-feature histogram of observed values with per-class counts. Bounded
/// at `max_bins` distinct values; overflow merges into the nearest bin.
#[derive(Debug, Clone)]
struct FeatureHist {
    bins: Vec<(f64, Vec<u64>)>,
    max_bins: usize,
}

impl FeatureHist {
    fn new(max_bins: usize) -> Self {
        Self {
            bins: Vec::new(),
            max_bins,
        }
    }

    fn add(&mut self, value: f64, class: usize, n_classes: usize) {
        match self
            .bins
            .binary_search_by(|(v, _)| v.partial_cmp(&value).expect("finite feature"))
        {
            Ok(i) => self.bins[i].1[class] += 1,
            Err(i) => {
                if self.bins.len() < self.max_bins {
                    let mut counts = vec![0; n_classes];
                    counts[class] = 1;
                    self.bins.insert(i, (value, counts));
                } else {
                    // Route to the nearest existing bin.
                    let candidates = [i.saturating_sub(1), i.min(self.bins.len() - 1)];
                    let nearest = candidates
                        .into_iter()
                        .min_by(|&a, &b| {
                            let da = (self.bins[a].0 - value).abs();
                            let db = (self.bins[b].0 - value).abs();
                            da.partial_cmp(&db).expect("finite feature")
                        })
                        .expect("bins non-empty");
                    self.bins[nearest].1[class] += 1;
                }
            }
        }
    }

    /// Best (gain, threshold) over binary splits `x <= value`, or None when
    /// fewer than two bins exist.
    fn best_split(&self, parent_counts: &[u64]) -> Option<(f64, f64)> {
        if self.bins.len() < 2 {
            return None;
        }
        let total: u64 = parent_counts.iter().sum();
        let parent_entropy = entropy(parent_counts);
        let mut left = vec![0u64; parent_counts.len()];
        let mut best: Option<(f64, f64)> = None;
        for (value, counts) in &self.bins[..self.bins.len() - 1] {
            for (l, c) in left.iter_mut().zip(counts) {
                *l += c;
            }
            let n_left: u64 = left.iter().sum();
            let n_right = total - n_left;
            if n_left == 0 || n_right == 0 {
                continue;
            }
            let right: Vec<u64> = parent_counts
                .iter()
                .zip(&left)
                .map(|(p, l)| p - l)
                .collect();
            let weighted = (n_left as f64 * entropy(&left) + n_right as f64 * entropy(&right))
                / total as f64;
            let gain = parent_entropy - weighted;
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, *value));
            }
        }
        best
    }
}

fn entropy(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone)]
struct LeafStats {
    class_counts: Vec<u64>,
    hists: Vec<FeatureHist>,
    since_attempt: u64,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(LeafStats),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Incremental decision tree growing leaves into binary threshold splits
/// certified by the Hoeffding bound.
#[derive(Debug, Clone)]
pub struct HoeffdingTree {
    nodes: Vec<Node>,
    n_classes: usize,
    n_features: usize,
    grace: u64,
    delta: f64,
    /// VFDT tie threshold: equally good candidates split once the bound
    /// shrinks below tau, otherwise same-gain features stall forever.
    tie_threshold: f64,
    max_bins: usize,
}

impl HoeffdingTree {
    /// Tree with the standard VFDT-style defaults: grace 200, delta 1e-7,
    /// tie threshold 0.05.
    pub fn new(n_classes: usize, n_features: usize) -> Self {
        Self::with_params(n_classes, n_features, 200, 1e-7)
    }

    pub fn with_params(n_classes: usize, n_features: usize, grace: u64, delta: f64) -> Self {
        let root = Node::Leaf(LeafStats {
            class_counts: vec![0; n_classes],
            hists: (0..n_features).map(|_| FeatureHist::new(64)).collect(),
            since_attempt: 0,
        });
        Self {
            nodes: vec![root],
            n_classes,
            n_features,
            grace,
            delta,
            tie_threshold: 0.05,
            max_bins: 64,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn route(&self, features: &[f64]) -> usize {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf(_) => return idx,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if features[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn learn_one(&mut self, example: &LabeledExample) -> Result<()> {
        check_dim(self.n_features, &example.features)?;
        let idx = self.route(&example.features);
        let (grace, delta) = (self.grace, self.delta);
        let Node::Leaf(stats) = &mut self.nodes[idx] else {
            unreachable!("route returns a leaf")
        };
        stats.class_counts[example.label] += 1;
        for (f, &x) in example.features.iter().enumerate() {
            stats.hists[f].add(x, example.label, stats.class_counts.len());
        }
        stats.since_attempt += 1;
        if stats.since_attempt >= grace {
            stats.since_attempt = 0;
            self.try_split(idx, delta);
        }
        Ok(())
    }

    fn try_split(&mut self, idx: usize, delta: f64) {
        let Node::Leaf(stats) = &self.nodes[idx] else {
            return;
        };
        let n: u64 = stats.class_counts.iter().sum();
        if n < 2 || entropy(&stats.class_counts) == 0.0 {
            return;
        }
        // Best candidate per feature; the bound compares the two best
        // features (a single-feature tree competes against the null split).
        let mut ranked: Vec<(f64, usize, f64)> = Vec::new();
        for f in 0..self.n_features {
            if let Some((gain, threshold)) = stats.hists[f].best_split(&stats.class_counts) {
                ranked.push((gain, f, threshold));
            }
        }
        ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite gains"));
        let Some(&(best_gain, feature, threshold)) = ranked.first() else {
            return;
        };
        let second_gain = ranked.get(1).map_or(0.0, |r| r.0);
        let range = (self.n_classes as f64).log2();
        let eps = hoeffding_bound(range, delta, n).expect("valid bound arguments");
        let clear_winner = best_gain - second_gain > eps;
        let tie = eps < self.tie_threshold;
        if best_gain <= 1e-12 || !(clear_winner || tie) {
            return;
        }

        // Children inherit the class distribution implied by the winning
        // threshold so fresh leaves predict sensibly before new data arrives.
        let mut left_counts = vec![0u64; self.n_classes];
        for (value, counts) in &stats.hists[feature].bins {
            if *value <= threshold {
                for (l, c) in left_counts.iter_mut().zip(counts) {
                    *l += c;
                }
            }
        }
        let right_counts: Vec<u64> = stats
            .class_counts
            .iter()
            .zip(&left_counts)
            .map(|(p, l)| p - l)
            .collect();

        let make_leaf = |counts: Vec<u64>| {
            Node::Leaf(LeafStats {
                class_counts: counts,
                hists: (0..self.n_features)
                    .map(|_| FeatureHist::new(self.max_bins))
                    .collect(),
                since_attempt: 0,
            })
        };
        let left = self.nodes.len();
        self.nodes.push(make_leaf(left_counts));
        let right = self.nodes.len();
        self.nodes.push(make_leaf(right_counts));
        self.nodes[idx] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
    }
}

impl Model for HoeffdingTree {
    fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax_lowest_tie(&self.scores(features)?))
    }

    fn scores(&self, features: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_features, features)?;
        let Node::Leaf(stats) = &self.nodes[self.route(features)] else {
            unreachable!("route returns a leaf")
        };
        Ok(stats.class_counts.iter().map(|&c| c as f64).collect())
    }
}

impl Strategy for HoeffdingTree {
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
        "hoeffding"
    }
}
