//! Experiment runner for restart schemes: builds problems from settings,
//! runs methods, writes traces and summaries.

pub mod cli;
pub mod config;
mod error;
pub mod experiment;
pub mod output;

pub use error::{BenchError, Result};
