use rand::Rng;

use crate::error::{CoreError, Result};

/// How the active concept hands over at each boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum DriftSpeed {
    /// The new concept takes over at the boundary step.
    Abrupt,
    /// For `width` steps after a boundary the old concept is still emitted
    /// with a probability that decays linearly from 1 to 0.
    Gradual { width: usize },
    /// Deterministic analogue of `Gradual`: over a window of `stages` steps
    /// the new-concept density ramps from 0 to 1 in a fixed dithered pattern,
    /// so the transition passes through intermediate mixing stages without
    /// consuming randomness.
    Incremental { stages: usize },
    /// Segments between boundaries cycle through previously seen concepts.
    Recurring { cycle: Vec<usize> },
}

/// Step indices at which the active concept changes, plus handover semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSchedule {
    boundaries: Vec<usize>,
    speed: DriftSpeed,
}

impl DriftSchedule {
    pub fn new(boundaries: Vec<usize>, speed: DriftSpeed) -> Result<Self> {
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::InvalidArgument(
                "boundaries must be strictly increasing".into(),
            ));
        }
        match &speed {
            DriftSpeed::Gradual { width } if *width == 0 => {
                return Err(CoreError::InvalidArgument("gradual width must be > 0".into()));
            }
            DriftSpeed::Incremental { stages } if *stages == 0 => {
                return Err(CoreError::InvalidArgument(
                    "incremental stages must be > 0".into(),
                ));
            }
            DriftSpeed::Recurring { cycle } => {
                if cycle.is_empty() {
                    return Err(CoreError::InvalidArgument(
                        "recurring cycle must be non-empty".into(),
                    ));
                }
                // With B boundaries there are B+1 segments, hence concepts
                // 0..=B are addressable.
                let max_concept = boundaries.len();
                if cycle.iter().any(|&c| c > max_concept) {
                    return Err(CoreError::InvalidArgument(format!(
                        "recurring cycle references concept beyond {max_concept}"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self { boundaries, speed })
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn speed(&self) -> &DriftSpeed {
        &self.speed
    }

    /// Number of stream segments (concepts in playback order).
    pub fn segments(&self) -> usize {
        self.boundaries.len() + 1
    }

    /// Index of the segment containing `step` (ignores handover mixing).
    fn segment_of(&self, step: usize) -> usize {
        self.boundaries.iter().filter(|&&b| b <= step).count()
    }

    /// Concept emitted at `step`. For `Gradual` speeds this is stochastic
    /// inside the handover window and draws from `rng`.
    pub fn concept_at<R: Rng>(&self, step: usize, rng: &mut R) -> usize {
        let seg = self.segment_of(step);
        match &self.speed {
            DriftSpeed::Abrupt => seg,
            DriftSpeed::Gradual { width } => {
                if seg == 0 {
                    return 0;
                }
                let offset = step - self.boundaries[seg - 1];
                if offset >= *width {
                    return seg;
                }
                let p_old = 1.0 - offset as f64 / *width as f64;
                if rng.random_bool(p_old) {
                    seg - 1
                } else {
                    seg
                }
            }
            DriftSpeed::Incremental { stages } => {
                if seg == 0 {
                    return 0;
                }
                let offset = step - self.boundaries[seg - 1];
                if offset >= *stages {
                    return seg;
                }
                // Dithered ramp: cumulative new-concept emissions by offset o
                // track o^2 / (2 * stages), i.e. density o / stages.
                let target = |o: usize| o * o / (2 * stages);
                if target(offset + 1) > target(offset) {
                    seg
                } else {
                    seg - 1
                }
            }
            DriftSpeed::Recurring { cycle } => cycle[seg % cycle.len()],
        }
    }
}

/// Concept emitted at `step` under `schedule`.
pub fn next_concept_index<R: Rng>(schedule: &DriftSchedule, step: usize, rng: &mut R) -> usize {
    schedule.concept_at(step, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn abrupt_boundary_semantics() {
        let s = DriftSchedule::new(vec![100], DriftSpeed::Abrupt).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(s.concept_at(99, &mut rng), 0);
        assert_eq!(s.concept_at(100, &mut rng), 1);
    }

    #[test]
    fn gradual_midpoint_is_half_old() {
        let s = DriftSchedule::new(vec![1000], DriftSpeed::Gradual { width: 200 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 10_000;
        let old = (0..draws)
            .filter(|_| s.concept_at(1100, &mut rng) == 0)
            .count();
        let p_old = old as f64 / draws as f64;
        assert!(
            (p_old - 0.5).abs() < 0.05,
            "P(old) at midpoint was {p_old}, expected 0.5 +- 0.05"
        );
    }

    #[test]
    fn gradual_is_pure_outside_window() {
        let s = DriftSchedule::new(vec![1000], DriftSpeed::Gradual { width: 200 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(s.concept_at(999, &mut rng), 0);
        assert_eq!(s.concept_at(1200, &mut rng), 1);
    }

    #[test]
    fn recurring_cycle_returns_to_first_concept() {
        let s = DriftSchedule::new(
            vec![100, 200],
            DriftSpeed::Recurring {
                cycle: vec![0, 1, 0],
            },
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(s.concept_at(50, &mut rng), 0);
        assert_eq!(s.concept_at(150, &mut rng), 1);
        assert_eq!(s.concept_at(250, &mut rng), 0);
    }

    #[test]
    fn incremental_ramp_is_deterministic_and_monotone() {
        let s = DriftSchedule::new(vec![100], DriftSpeed::Incremental { stages: 40 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let before = rng.clone();
        let emitted: Vec<usize> = (90..160).map(|t| s.concept_at(t, &mut rng)).collect();
        // No randomness consumed.
        assert_eq!(rng, before);
        // Pure old before the window, pure new after it.
        assert!(emitted[..10].iter().all(|&c| c == 0));
        assert!(emitted[50..].iter().all(|&c| c == 1));
        // Density of the new concept rises across the window.
        let first_half = emitted[10..30].iter().filter(|&&c| c == 1).count();
        let second_half = emitted[30..50].iter().filter(|&&c| c == 1).count();
        assert!(first_half < second_half);
    }

    #[test]
    fn validation_rejects_bad_schedules() {
        assert!(DriftSchedule::new(vec![5, 5], DriftSpeed::Abrupt).is_err());
        assert!(DriftSchedule::new(vec![5, 4], DriftSpeed::Abrupt).is_err());
        assert!(DriftSchedule::new(vec![5], DriftSpeed::Gradual { width: 0 }).is_err());
        assert!(DriftSchedule::new(vec![5], DriftSpeed::Recurring { cycle: vec![] }).is_err());
        assert!(DriftSchedule::new(vec![5], DriftSpeed::Recurring { cycle: vec![2] }).is_err());
    }
}
