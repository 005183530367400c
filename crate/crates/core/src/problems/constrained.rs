use std::f64::consts::SQRT_2;

use super::Problem;
use crate::error::{Error, Result};
use crate::population::Bounds;

/// Default static-penalty weight.
pub const DEFAULT_PENALTY: f64 = 1e7;

/// `f + w·Σ max(0, gᵢ)`; constraints are feasible when `gᵢ ≤ 0`.
pub fn penalized_fitness(f: f64, g_values: &[f64], w: f64) -> f64 {
    f + w * g_values.iter().map(|g| g.max(0.0)).sum::<f64>()
}

/// Objective with inequality constraints `g(x) ≤ 0`.
pub trait ConstrainedProblem: Send + Sync {
    fn name(&self) -> &str;

    fn bounds(&self) -> Bounds;

    /// Objective and constraint values at `x`.
    fn objective_and_constraints(&self, x: &[f64]) -> Result<(f64, Vec<f64>)>;

    fn known_optimum(&self) -> Option<f64> {
        None
    }
}

/// Static-penalty wrapper turning a [`ConstrainedProblem`] into a [`Problem`].
/// Evaluation errors map to `+inf`.
#[derive(Debug, Clone)]
pub struct Penalized<C> {
    inner: C,
    bounds: Bounds,
    weight: f64,
}

impl<C: ConstrainedProblem> Penalized<C> {
    pub fn new(inner: C, weight: f64) -> Result<Self> {
        if !(weight > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "penalty weight must be positive, got {weight}"
            )));
        }
        let bounds = inner.bounds();
        Ok(Self {
            inner,
            bounds,
            weight,
        })
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

impl<C: ConstrainedProblem> Problem for Penalized<C> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        match self.inner.objective_and_constraints(x) {
            Ok((f, g)) => penalized_fitness(f, &g, self.weight),
            Err(_) => f64::INFINITY,
        }
    }

    fn known_optimum(&self) -> Option<f64> {
        self.inner.known_optimum()
    }
}

/// Three-bar truss design: minimize structure volume subject to member
/// stress limits. Variables are the cross sections `(x₁, x₂) ∈ [0, 1]²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThreeBarTruss;

impl ThreeBarTruss {
    pub const LENGTH: f64 = 100.0;
    pub const LOAD: f64 = 2.0;
    pub const STRESS: f64 = 2.0;
    /// Best known volume.
    pub const BEST_KNOWN: f64 = 263.895_843_376;
}

impl ConstrainedProblem for ThreeBarTruss {
    fn name(&self) -> &str {
        "three-bar-truss"
    }

    fn bounds(&self) -> Bounds {
        Bounds::cube(2, 0.0, 1.0).expect("unit square")
    }

    fn objective_and_constraints(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let [x1, x2] = x else {
            return Err(Error::Dimension {
                expected: 2,
                actual: x.len(),
            });
        };
        let (x1, x2) = (*x1, *x2);
        let d12 = SQRT_2 * x1 * x1 + 2.0 * x1 * x2;
        let d3 = x1 + SQRT_2 * x2;
        if d12 == 0.0 || d3 == 0.0 {
            return Err(Error::Singular(format!(
                "three-bar truss stress undefined at ({x1}, {x2})"
            )));
        }
        let (p, s) = (Self::LOAD, Self::STRESS);
        let f = (2.0 * SQRT_2 * x1 + x2) * Self::LENGTH;
        let g = vec![
            (SQRT_2 * x1 + x2) * p / d12 - s,
            x2 * p / d12 - s,
            p / d3 - s,
        ];
        Ok((f, g))
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(Self::BEST_KNOWN)
    }
}
