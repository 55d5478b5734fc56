//! Error-rate drift detectors: adaptive windowing over an exponential
//! histogram, and a running-error monitor with warning/drift thresholds.

mod adwin;
mod ddm;

pub use adwin::Adwin;
pub use ddm::{Ddm, DdmLevel};
