//! Scenario-file front end for twistlab: parsing, evaluation and reports.

pub mod commands;
pub mod model;
pub mod render;
pub mod scenario;

pub use commands::{run, Outcome, EXIT_EXPECTATION, EXIT_INPUT, EXIT_OK};
