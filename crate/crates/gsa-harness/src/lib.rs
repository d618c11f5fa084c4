//! Experiment harness for the typed coevolutionary optimizer: matrix
//! planning, deterministic seeding, parallel execution with a sequential
//! fallback, CSV persistence, and markdown reporting.

pub mod algorithms;
pub mod config;
mod error;
pub mod report;
pub mod runner;

pub use error::{HarnessError, Result};
