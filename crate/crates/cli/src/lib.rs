//! Configuration, run orchestration and file output for `vsw`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;
pub mod tools;

pub use config::RunConfig;
pub use run::{run, sweep, RunSummary};
