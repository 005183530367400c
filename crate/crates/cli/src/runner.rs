//! Trial execution. Every trial owns its seeded stream, so results do not
//! depend on scheduling; collection is ordered by cell index.

use embgo_core::{Optimizer, OptimizerConfig, Problem, RngStream, RunResult};
use rayon::prelude::*;

use crate::error::CliError;

/// Seed of trial `k`: the base seed offset by the trial index.
pub fn trial_seed(base: u64, trial: usize) -> u64 {
    RngStream::for_trial(base, trial as u64).seed()
}

/// One (problem, algorithm, trial) unit of work.
pub struct Cell<'a> {
    pub problem: &'a dyn Problem,
    pub optimizer: &'a dyn Optimizer,
    pub config: OptimizerConfig,
}

/// Runs all cells on up to `jobs` threads (0 = pool default) and returns the
/// results in cell order.
pub fn run_cells(cells: &[Cell<'_>], jobs: usize) -> Result<Vec<RunResult>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                c.optimizer
                    .run_seeded(c.problem, &c.config)
                    .map_err(CliError::from)
            })
            .collect()
    })
}
