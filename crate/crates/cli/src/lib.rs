//! Seeded experiment runner for the `embgo-core` optimizers.
//!
//! Three experiments, each writing plain-text results under an output
//! directory:
//!
//! * [`cmd_run`]: per-trial convergence traces and a summary table.
//! * [`cmd_compare`]: the same, plus a comparison report with
//!   significance marks against a reference algorithm and average ranks.
//! * [`cmd_arnas`]: architecture search over a tabulated cell space with
//!   regret against the exhaustive optimum.
//!
//! Every file starts with a `# config: {…}` line holding the resolved
//! configuration, so results are self-describing.

pub mod commands;
pub mod config;
pub mod error;
pub mod runner;

pub use commands::{cmd_arnas, cmd_compare, cmd_run, ArnasConfig, TableSource};
pub use config::ExperimentConfig;
pub use error::CliError;
