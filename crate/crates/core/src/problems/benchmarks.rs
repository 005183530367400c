use std::f64::consts::{E, PI};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::transform::Transform;
use super::Problem;
use crate::error::{Error, Result};
use crate::population::Bounds;

/// Canonical test functions, each written so that its global minimum is 0
/// at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Function {
    Sphere,
    BentCigar,
    Zakharov,
    Rosenbrock,
    Rastrigin,
    Ackley,
    Griewank,
    Levy,
    Schwefel,
    ExpandedSchafferF6,
}

/// Argmax of `z·sin(√|z|)`, the Schwefel optimum offset.
const SCHWEFEL_SHIFT: f64 = 420.968_746_227_503_6;

impl Function {
    pub const ALL: [Function; 10] = [
        Function::Sphere,
        Function::BentCigar,
        Function::Zakharov,
        Function::Rosenbrock,
        Function::Rastrigin,
        Function::Ackley,
        Function::Griewank,
        Function::Levy,
        Function::Schwefel,
        Function::ExpandedSchafferF6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sphere => "sphere",
            Function::BentCigar => "bent-cigar",
            Function::Zakharov => "zakharov",
            Function::Rosenbrock => "rosenbrock",
            Function::Rastrigin => "rastrigin",
            Function::Ackley => "ackley",
            Function::Griewank => "griewank",
            Function::Levy => "levy",
            Function::Schwefel => "schwefel",
            Function::ExpandedSchafferF6 => "expanded-schaffer-f6",
        }
    }

    pub fn evaluate(self, z: &[f64]) -> f64 {
        let d = z.len() as f64;
        match self {
            Function::Sphere => z.iter().map(|v| v * v).sum(),
            Function::BentCigar => {
                let (head, tail) = z.split_first().expect("non-empty input");
                head * head + 1e6 * tail.iter().map(|v| v * v).sum::<f64>()
            }
            Function::Zakharov => {
                let sq: f64 = z.iter().map(|v| v * v).sum();
                let lin: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum();
                sq + lin.powi(2) + lin.powi(4)
            }
            Function::Rosenbrock => z
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0] + 1.0, w[1] + 1.0);
                    100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2)
                })
                .sum(),
            Function::Rastrigin => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            Function::Ackley => {
                let sq = z.iter().map(|v| v * v).sum::<f64>() / d;
                let cs = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            Function::Griewank => {
                let sum = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            Function::Levy => {
                let w: Vec<f64> = z.iter().map(|v| 1.0 + v / 4.0).collect();
                let n = w.len();
                let first = (PI * w[0]).sin().powi(2);
                let middle: f64 = w[..n - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                let wn = w[n - 1];
                let last = (wn - 1.0).powi(2) * (1.0 + (2.0 * PI * wn).sin().powi(2));
                first + middle + last
            }
            Function::Schwefel => {
                let peak = schwefel_term(SCHWEFEL_SHIFT, d);
                z.iter()
                    .map(|v| peak - schwefel_term(v + SCHWEFEL_SHIFT, d))
                    .sum()
            }
            Function::ExpandedSchafferF6 => {
                let n = z.len();
                (0..n).map(|i| schaffer_f6(z[i], z[(i + 1) % n])).sum()
            }
        }
    }
}

/// Modified Schwefel term with the usual quadratic fold outside ±500.
fn schwefel_term(z: f64, d: f64) -> f64 {
    if z > 500.0 {
        let m = 500.0 - z.rem_euclid(500.0);
        m * m.abs().sqrt().sin() - (z - 500.0).powi(2) / (10_000.0 * d)
    } else if z < -500.0 {
        let m = z.abs().rem_euclid(500.0) - 500.0;
        m * m.abs().sqrt().sin() - (z + 500.0).powi(2) / (10_000.0 * d)
    } else {
        z * z.abs().sqrt().sin()
    }
}

fn schaffer_f6(x: f64, y: f64) -> f64 {
    let s = x * x + y * y;
    0.5 + (s.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * s).powi(2)
}

impl FromStr for Function {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Function::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "benchmark",
                name: s.to_string(),
            })
    }
}

/// Raw objective value of the named benchmark at `x` (no transform).
pub fn evaluate_benchmark(name: &str, x: &[f64]) -> Result<f64> {
    let f: Function = name.parse()?;
    if x.is_empty() {
        return Err(Error::Dimension {
            expected: 1,
            actual: 0,
        });
    }
    Ok(f.evaluate(x))
}

/// A benchmark function over a box, optionally composed with a transform.
#[derive(Debug, Clone)]
pub struct Benchmark {
    function: Function,
    bounds: Bounds,
    transform: Option<Transform>,
    name: String,
}

impl Benchmark {
    pub fn new(function: Function, bounds: Bounds) -> Self {
        Self {
            function,
            bounds,
            transform: None,
            name: function.name().to_string(),
        }
    }

    pub fn with_transform(mut self, transform: Transform) -> Result<Self> {
        if transform.dim() != self.bounds.dim() {
            return Err(Error::Dimension {
                expected: self.bounds.dim(),
                actual: transform.dim(),
            });
        }
        if !self.bounds.contains(transform.shift()) {
            return Err(Error::InvalidConfig(
                "transform shift lies outside the box".into(),
            ));
        }
        self.name = format!("sr-{}", self.function.name());
        self.transform = Some(transform);
        Ok(self)
    }

    pub fn function(&self) -> Function {
        self.function
    }

    pub fn transform(&self) -> Option<&Transform> {
        self.transform.as_ref()
    }

    /// Location of the global minimum inside the box.
    pub fn optimum_location(&self) -> Vec<f64> {
        match &self.transform {
            Some(t) => t.shift().to_vec(),
            None => vec![0.0; self.bounds.dim()],
        }
    }
}

impl Problem for Benchmark {
    fn name(&self) -> &str {
        &self.name
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        match &self.transform {
            Some(t) => self.function.evaluate(&t.apply(x)),
            None => self.function.evaluate(x),
        }
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(0.0)
    }
}
