use crate::error::{CoreError, Result};
use crate::eval::window::RollingWindow;
use crate::learners::{Model, Strategy};
use crate::stream::Scenario;

/// One prequential record: the prediction made before training on the
/// example, plus the windowed kappa at that step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub concept: usize,
    pub y_true: usize,
    pub y_pred: usize,
    pub kappa: f64,
}

/// Full test-then-train record of one run over a scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrequentialTrace {
    pub steps: Vec<TraceStep>,
    /// Stream step indices where a new concept begins.
    pub boundaries: Vec<usize>,
}

impl PrequentialTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Run the test-then-train protocol over a scenario's training streams.
///
/// For each minibatch every example is predicted with the current model and
/// scored through the rolling window (reset at concept boundaries), then the
/// strategy trains once on the whole minibatch. A snapshot is stored at the
/// end of every concept, including the last.
pub fn prequential_run(
    scenario: &Scenario,
    strategy: &mut dyn Strategy,
    batch_size: usize,
    window_capacity: usize,
) -> Result<(PrequentialTrace, Vec<Box<dyn Model + Send>>)> {
    if batch_size == 0 {
        return Err(CoreError::InvalidArgument("batch_size must be >= 1".into()));
    }
    let mut window = RollingWindow::new(window_capacity, scenario.n_classes);
    let mut steps = Vec::with_capacity(scenario.stream_len());
    let mut checkpoints: Vec<Box<dyn Model + Send>> = Vec::new();
    let mut step = 0usize;
    for (ci, concept) in scenario.concepts.iter().enumerate() {
        let mut first_of_concept = ci > 0;
        for batch in concept.train.chunks(batch_size) {
            for ex in batch {
                let y_pred = strategy.predict(&ex.features)?;
                let kappa = window.update(ex.label, y_pred, first_of_concept)?;
                first_of_concept = false;
                steps.push(TraceStep {
                    step,
                    concept: ex.concept,
                    y_true: ex.label,
                    y_pred,
                    kappa,
                });
                step += 1;
            }
            strategy.learn(batch)?;
        }
        checkpoints.push(strategy.snapshot());
    }
    Ok((
        PrequentialTrace {
            steps,
            boundaries: scenario.schedule.boundaries().to_vec(),
        },
        checkpoints,
    ))
}

/// Mean over the stream of the running cumulative accuracy at every step.
pub fn anytime_accuracy(trace: &PrequentialTrace) -> Result<f64> {
    if trace.is_empty() {
        return Err(CoreError::UndefinedMetric(
            "anytime accuracy of an empty trace".into(),
        ));
    }
    let mut correct = 0usize;
    let mut sum = 0.0;
    for (i, s) in trace.steps.iter().enumerate() {
        correct += usize::from(s.y_true == s.y_pred);
        sum += correct as f64 / (i + 1) as f64;
    }
    Ok(sum / trace.steps.len() as f64)
}
