//! Streaming continual-learning benchmark core: drifting stream generators,
//! single-pass classifiers, online continual-learning strategies, drift
//! detectors, and the dual prequential / continual evaluation protocols.

pub mod drift;
pub mod eval;
pub mod learners;
pub mod neural;
pub mod error;
pub mod stream;

pub use error::{CoreError, Result};
