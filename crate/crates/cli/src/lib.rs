//! Experiment harness for gradient descent in 2x2 zero-sum games.
//!
//! The binary exposes four commands: `simulate` (one run, tables and
//! figures), `sweep` (a grid of step sizes and random starts), `verify`
//! (self-check suites) and `plot` (figures from existing tables).

pub mod analysis;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod verify;

pub use commands::{cmd_plot, cmd_simulate, cmd_sweep};
pub use error::CliError;
