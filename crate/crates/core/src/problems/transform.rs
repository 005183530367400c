use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{RandomSource, RngStream};

const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Shift-then-rotate map `x ↦ M·(x − o)` with orthogonal `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    shift: Vec<f64>,
    /// Row-major D×D.
    rotation: Vec<f64>,
}

impl Transform {
    /// Validates that `rotation` is a D×D orthogonal matrix.
    pub fn new(shift: Vec<f64>, rotation: Vec<f64>) -> Result<Self> {
        let d = shift.len();
        if rotation.len() != d * d {
            return Err(Error::Dimension {
                expected: d * d,
                actual: rotation.len(),
            });
        }
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d)
                    .map(|k| rotation[k * d + i] * rotation[k * d + j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > ORTHOGONALITY_TOL {
                    return Err(Error::InvalidConfig(format!(
                        "rotation is not orthogonal: (MᵀM)[{i}][{j}] = {dot}"
                    )));
                }
            }
        }
        Ok(Self { shift, rotation })
    }

    pub fn identity(dim: usize) -> Self {
        let mut rotation = vec![0.0; dim * dim];
        for i in 0..dim {
            rotation[i * dim + i] = 1.0;
        }
        Self {
            shift: vec![0.0; dim],
            rotation,
        }
    }

    /// Seeded random instance: shift uniform in `[-shift_range, shift_range]^dim`,
    /// rotation from Gram–Schmidt on a Gaussian matrix.
    pub fn random(dim: usize, seed: u64, shift_range: f64) -> Result<Self> {
        let mut rng = RngStream::new(seed);
        let shift = (0..dim)
            .map(|_| rng.uniform_in(-shift_range, shift_range))
            .collect();
        let rotation = random_orthogonal(dim, &mut rng);
        Self::new(shift, rotation)
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn rotation(&self) -> &[f64] {
        &self.rotation
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let centered: Vec<f64> = x.iter().zip(&self.shift).map(|(a, o)| a - o).collect();
        (0..d)
            .map(|i| {
                self.rotation[i * d..(i + 1) * d]
                    .iter()
                    .zip(&centered)
                    .map(|(m, v)| m * v)
                    .sum()
            })
            .collect()
    }

    /// Inverse map `z ↦ Mᵀ·z + o`.
    pub fn invert(&self, z: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| self.rotation[i * d + j] * z[i]).sum::<f64>() + self.shift[j])
            .collect()
    }
}

/// `M·(x − o)`.
pub fn apply_transform(t: &Transform, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != t.dim() {
        return Err(Error::Dimension {
            expected: t.dim(),
            actual: x.len(),
        });
    }
    Ok(t.apply(x))
}

/// Modified Gram–Schmidt over Gaussian rows. Redraws a row on (improbable)
/// near-linear dependence.
fn random_orthogonal<R: RandomSource>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        for _ in 0..2 {
            for r in &rows {
                let proj: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= proj * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|a| *a /= norm);
        rows.push(v);
    }
    rows.concat()
}
