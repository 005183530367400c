//! Multiplayer battle game optimizers and the tooling to compare them.
//!
//! * [`mbgo`] and [`embgo`]: the two-phase optimizer and its merged-phase
//!   variant with differential mutation and Lévy flight.
//! * [`baselines`]: DE/cur-to-rand/1, global-best PSO and random search.
//! * [`problems`]: continuous benchmarks, seeded shift/rotation, static
//!   penalty and the three-bar truss.
//! * [`discrete`]: quinary cell encoding over tabulated architecture
//!   accuracies.
//! * [`metrics`] and [`stats`]: population diversity, Mann–Whitney U, Holm
//!   correction, significance marks and average ranks.
//!
//! Everything minimizes. All randomness flows through [`rng::RngStream`], so
//! a run is a pure function of its problem, configuration and seed.

// `!(x > 0.0)` style checks deliberately reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod baselines;
pub mod discrete;
pub mod embgo;
pub mod error;
pub mod levy;
pub mod mbgo;
pub mod metrics;
pub mod population;
pub mod problems;
pub mod rng;
pub mod run;
pub mod stats;

pub use error::{Error, Result};
pub use population::{Bounds, Individual, Population};
pub use problems::Problem;
pub use rng::{RandomSource, RngStream};
pub use run::{Observer, Optimizer, OptimizerConfig, RunResult};
