//! Experiment orchestration behind the `silverstep` command.

pub mod bench;
pub mod figure;
