//! Dual evaluation engine: prequential test-then-train scoring with a
//! rolling kappa window, and checkpoint-based continual-learning metrics.

mod confusion;
mod matrix;
mod prequential;
mod window;

pub use confusion::{kappa, ConfusionMatrix};
pub use matrix::{acc_final, bwt, cl_matrix, k_avg, KappaMatrix, Metric};
pub use prequential::{anytime_accuracy, prequential_run, PrequentialTrace, TraceStep};
pub use window::RollingWindow;
