//! Drifting stream generation: seven-segment digit encodings, binary task
//! definitions, drift schedules, scenario builders, and CSV import/export.

mod csv;
mod scenario;
mod schedule;
mod segments;
mod tasks;

pub use csv::{load_csv_scenario, write_csv_scenario};
pub use scenario::{build_real_scenario, build_virtual_scenario, Concept, DriftKind, Scenario};
pub use schedule::{next_concept_index, DriftSchedule, DriftSpeed};
pub use segments::{digit_segments, sample_example, SegmentVector};
pub use tasks::{task_label, TaskId, TaskSpec};

/// One streamed observation: a feature vector, its binary class label, and
/// the index of the concept that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    pub features: Vec<f64>,
    pub label: usize,
    pub concept: usize,
}

impl LabeledExample {
    pub fn new(features: Vec<f64>, label: usize, concept: usize) -> Self {
        Self {
            features,
            label,
            concept,
        }
    }
}
