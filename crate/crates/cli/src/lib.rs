//! Front end for the `hamiltonize` library: equation parsing, problem
//! documents, the end-to-end pipeline, reports and built-in demos.

pub mod demos;
pub mod expr;
pub mod pipeline;
pub mod problem;
pub mod report;
pub mod sweep;

pub use pipeline::{run, Outcome, RunOptions, SimulationRequest, Stage};
pub use problem::ProblemSpec;
pub use report::Report;
