use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::stream::schedule::{DriftSchedule, DriftSpeed};
use crate::stream::segments::sample_example;
use crate::stream::tasks::TaskSpec;
use crate::stream::LabeledExample;

/// Nature of the change at a drift boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftKind {
    /// The input distribution moves; no previously seen input is relabeled.
    Virtual,
    /// At least one input keeps its features but changes label.
    Real,
}

/// One experience: a training stream and a held-out test set.
#[derive(Debug, Clone, PartialEq)]
pub struct Concept {
    pub train: Vec<LabeledExample>,
    pub test: Vec<LabeledExample>,
}

/// An ordered sequence of concepts with a drift schedule over the
/// concatenated training streams. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub concepts: Vec<Concept>,
    pub schedule: DriftSchedule,
    pub drift_kinds: Vec<DriftKind>,
    pub feature_dim: usize,
    pub n_classes: usize,
    pub seed: u64,
}

impl Scenario {
    /// Total number of training examples across all concepts.
    pub fn stream_len(&self) -> usize {
        self.concepts.iter().map(|c| c.train.len()).sum()
    }

    pub fn n_concepts(&self) -> usize {
        self.concepts.len()
    }
}

fn abrupt_schedule(train_lens: &[usize]) -> DriftSchedule {
    let mut boundaries = Vec::new();
    let mut acc = 0;
    for len in &train_lens[..train_lens.len() - 1] {
        acc += len;
        boundaries.push(acc);
    }
    DriftSchedule::new(boundaries, DriftSpeed::Abrupt).expect("cumulative sums are increasing")
}

fn draw_examples<R: Rng>(
    digits: &[u8],
    labels: &[usize; 10],
    count: usize,
    noise_p: f64,
    concept: usize,
    rng: &mut R,
) -> Result<Vec<LabeledExample>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let digit = digits[rng.random_range(0..digits.len())];
        let features = sample_example(digit, noise_p, rng)?;
        out.push(LabeledExample::new(
            features,
            labels[digit as usize],
            concept,
        ));
    }
    Ok(out)
}

/// Five-concept virtual-drift scenario: a seeded pairing of the odd with the
/// even digits, one pair per concept, labeled by parity throughout.
pub fn build_virtual_scenario(
    seed: u64,
    examples_per_concept: usize,
    test_per_concept: usize,
    noise_p: f64,
) -> Result<Scenario> {
    if examples_per_concept == 0 || test_per_concept == 0 {
        return Err(CoreError::InvalidArgument(
            "concept sizes must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut odd = [1u8, 3, 5, 7, 9];
    let mut even = [0u8, 2, 4, 6, 8];
    odd.shuffle(&mut rng);
    even.shuffle(&mut rng);

    let mut parity = [0usize; 10];
    for (d, label) in parity.iter_mut().enumerate() {
        *label = d % 2;
    }

    let mut concepts = Vec::with_capacity(5);
    for i in 0..5 {
        let digits = [odd[i], even[i]];
        let train = draw_examples(&digits, &parity, examples_per_concept, noise_p, i, &mut rng)?;
        let test = draw_examples(&digits, &parity, test_per_concept, noise_p, i, &mut rng)?;
        concepts.push(Concept { train, test });
    }

    let train_lens: Vec<usize> = concepts.iter().map(|c| c.train.len()).collect();
    Ok(Scenario {
        name: "virtual".into(),
        schedule: abrupt_schedule(&train_lens),
        drift_kinds: vec![DriftKind::Virtual; 4],
        concepts,
        feature_dim: 7,
        n_classes: 2,
        seed,
    })
}

/// Five-concept real-drift scenario: every concept draws all ten digits and
/// labels them with the corresponding task in `task_order`.
pub fn build_real_scenario(
    seed: u64,
    examples_per_concept: usize,
    test_per_concept: usize,
    noise_p: f64,
    task_order: &[TaskSpec],
) -> Result<Scenario> {
    if examples_per_concept == 0 || test_per_concept == 0 {
        return Err(CoreError::InvalidArgument(
            "concept sizes must be positive".into(),
        ));
    }
    if task_order.len() != 5 {
        return Err(CoreError::InvalidArgument(format!(
            "task_order must contain the 5 built-in tasks, got {}",
            task_order.len()
        )));
    }
    for (i, a) in task_order.iter().enumerate() {
        for b in &task_order[i + 1..] {
            if a.id() == b.id() {
                return Err(CoreError::InvalidArgument(format!(
                    "duplicate task `{}` in task_order",
                    a.id().name()
                )));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digits: Vec<u8> = (0..10).collect();
    let mut concepts = Vec::with_capacity(5);
    for (i, task) in task_order.iter().enumerate() {
        let mut labels = [0usize; 10];
        for d in 0..10u8 {
            labels[d as usize] = task.label(d)?;
        }
        let train = draw_examples(&digits, &labels, examples_per_concept, noise_p, i, &mut rng)?;
        let test = draw_examples(&digits, &labels, test_per_concept, noise_p, i, &mut rng)?;
        concepts.push(Concept { train, test });
    }

    let train_lens: Vec<usize> = concepts.iter().map(|c| c.train.len()).collect();
    Ok(Scenario {
        name: "real".into(),
        schedule: abrupt_schedule(&train_lens),
        drift_kinds: vec![DriftKind::Real; 4],
        concepts,
        feature_dim: 7,
        n_classes: 2,
        seed,
    })
}
