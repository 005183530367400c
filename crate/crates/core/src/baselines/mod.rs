//! Reference optimizers for comparisons.

mod de;
mod pso;
mod random;

pub use de::{binomial_crossover, run_de, De, DeParams};
pub use pso::{run_pso, Pso, PsoParams};
pub use random::{run_random_search, RandomSearch};
