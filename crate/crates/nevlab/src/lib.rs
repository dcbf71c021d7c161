//! Batch orchestration over instance files: parsing, task execution on a
//! worker pool, and deterministic report artifacts.

pub mod cli;
pub mod instance;
pub mod report;
pub mod run;
