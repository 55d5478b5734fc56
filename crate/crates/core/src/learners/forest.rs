use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::drift::Adwin;
use crate::error::Result;
use crate::learners::{argmax_lowest_tie, check_dim, HoeffdingTree, Model, Strategy};
use crate::stream::LabeledExample;

#[derive(Debug, Clone)]
struct Member {
    tree: HoeffdingTree,
    detector: Adwin,
}

/// Online-bagged ensemble of Hoeffding trees with one error-rate detector
/// per member.
///
/// Each incoming example trains every tree `k ~ Poisson(lambda)` times. The
/// member's pre-train 0/1 error feeds its detector (test-then-train at the
/// member level); a detector hit replaces the tree and detector in place, so
/// the ensemble always holds exactly `n_trees` live members.
#[derive(Debug, Clone)]
pub struct AdaptiveForest {
    members: Vec<Member>,
    n_classes: usize,
    n_features: usize,
    lambda: f64,
    member_grace: u64,
    member_delta: f64,
    adwin_delta: f64,
    rng: ChaCha8Rng,
}

impl AdaptiveForest {
    /// Defaults: 10 trees, lambda 6, member grace 50, ADWIN delta 0.002.
    pub fn new(n_classes: usize, n_features: usize, seed: u64) -> Self {
        Self::with_params(n_classes, n_features, 10, 6.0, 50, seed)
    }

    pub fn with_params(
        n_classes: usize,
        n_features: usize,
        n_trees: usize,
        lambda: f64,
        member_grace: u64,
        seed: u64,
    ) -> Self {
        // Member trees split more eagerly than a standalone tree, as in the
        // usual streaming-forest configurations.
        let member_delta = 0.01;
        let adwin_delta = 0.002;
        let members = (0..n_trees)
            .map(|_| Member {
                tree: HoeffdingTree::with_params(n_classes, n_features, member_grace, member_delta),
                detector: Adwin::new(adwin_delta),
            })
            .collect();
        Self {
            members,
            n_classes,
            n_features,
            lambda,
            member_grace,
            member_delta,
            adwin_delta,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn n_trees(&self) -> usize {
        self.members.len()
    }

    fn poisson_draw(&mut self) -> u64 {
        if self.lambda <= 0.0 {
            return 0;
        }
        let poisson = Poisson::new(self.lambda).expect("lambda > 0");
        poisson.sample(&mut self.rng) as u64
    }

    pub fn learn_one(&mut self, example: &LabeledExample) -> Result<()> {
        check_dim(self.n_features, &example.features)?;
        for i in 0..self.members.len() {
            let pred = self.members[i].tree.predict(&example.features)?;
            let err = f64::from(pred != example.label);
            // A detector cut also fires while a young tree improves (its
            // error mean drops); only an increased retained error means the
            // member degraded and must be replaced.
            let before = self.members[i]
                .detector
                .estimate()
                .map_or(0.0, |(mean, _)| mean);
            let cut = self.members[i].detector.insert(err)?;
            let drifted = cut
                && self.members[i]
                    .detector
                    .estimate()
                    .is_ok_and(|(mean, _)| mean > before);
            if drifted {
                self.members[i] = Member {
                    tree: HoeffdingTree::with_params(
                        self.n_classes,
                        self.n_features,
                        self.member_grace,
                        self.member_delta,
                    ),
                    detector: Adwin::new(self.adwin_delta),
                };
            }
            let replicas = self.poisson_draw();
            for _ in 0..replicas {
                self.members[i].tree.learn_one(example)?;
            }
        }
        Ok(())
    }
}

impl Model for AdaptiveForest {
    fn predict(&self, features: &[f64]) -> Result<usize> {
        Ok(argmax_lowest_tie(&self.scores(features)?))
    }

    /// Per-class vote counts across members.
    fn scores(&self, features: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_features, features)?;
        let mut votes = vec![0.0; self.n_classes];
        for member in &self.members {
            votes[member.tree.predict(features)?] += 1.0;
        }
        Ok(votes)
    }
}

impl Strategy for AdaptiveForest {
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
        "forest"
    }
}
