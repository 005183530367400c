//! Objective functions: continuous benchmarks, seeded shift/rotation,
//! static-penalty constraint handling and the three-bar truss.

mod benchmarks;
mod constrained;
mod transform;

pub use benchmarks::{evaluate_benchmark, Benchmark, Function};
pub use constrained::{
    penalized_fitness, ConstrainedProblem, Penalized, ThreeBarTruss, DEFAULT_PENALTY,
};
pub use transform::{apply_transform, Transform};

use crate::error::{Error, Result};
use crate::population::Bounds;

/// Minimization objective over a box.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> &Bounds;

    fn dim(&self) -> usize {
        self.bounds().dim()
    }

    fn evaluate(&self, x: &[f64]) -> f64;

    fn known_optimum(&self) -> Option<f64> {
        None
    }
}

/// Seed used for the rotation and shift of every `sr-*` problem, mixed with
/// the dimension so that each (function, dimension) pair is one fixed instance.
pub const TRANSFORM_SEED: u64 = 0x5eed_0b60;

/// Benchmark search range.
pub const SEARCH_RANGE: (f64, f64) = (-100.0, 100.0);

/// Builds a problem from its registry name.
///
/// * `<function>` — raw benchmark on `[-100, 100]^dim`.
/// * `sr-<function>` — the same benchmark, shifted and rotated by a seeded
///   [`Transform`].
/// * `three-bar-truss` — statically penalized truss design (`dim` must be 2).
pub fn build_problem(name: &str, dim: usize) -> Result<Box<dyn Problem>> {
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    if name == "three-bar-truss" {
        if dim != 2 {
            return Err(Error::InvalidConfig(format!(
                "three-bar-truss is 2-dimensional, got dim {dim}"
            )));
        }
        return Ok(Box::new(Penalized::new(ThreeBarTruss, DEFAULT_PENALTY)?));
    }
    let bounds = Bounds::cube(dim, SEARCH_RANGE.0, SEARCH_RANGE.1)?;
    if let Some(base) = name.strip_prefix("sr-") {
        let function: Function = base.parse()?;
        let seed = TRANSFORM_SEED ^ (dim as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let transform = Transform::random(dim, seed, 0.8 * SEARCH_RANGE.1)?;
        return Ok(Box::new(
            Benchmark::new(function, bounds).with_transform(transform)?,
        ));
    }
    let function: Function = name.parse()?;
    Ok(Box::new(Benchmark::new(function, bounds)))
}

/// Registry names accepted by [`build_problem`].
pub fn problem_names() -> Vec<String> {
    let mut names: Vec<String> = Function::ALL.iter().map(|f| f.name().to_string()).collect();
    names.extend(Function::ALL.iter().map(|f| format!("sr-{}", f.name())));
    names.push("three-bar-truss".into());
    names
}
