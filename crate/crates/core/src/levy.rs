//! Lévy-flight steps via Mantegna's construction.
//!
//! A step component is `u / |v|^(1/β)` with `u ~ N(0, σ²)` and `v ~ N(0, 1)`,
//! where σ depends only on the index β.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for z > 0 (Lanczos approximation, about 15 significant digits).
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("gamma requires z > 0, got {z}")));
    }
    Ok(lanczos(z))
}

fn lanczos(z: f64) -> f64 {
    if z < 0.5 {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz)
        return PI / ((PI * z).sin() * lanczos(1.0 - z));
    }
    let z = z - 1.0;
    let mut acc = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Mantegna scale σ(β) for β in the open interval (0, 2).
pub fn levy_sigma(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let num = lanczos(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = beta * lanczos((1.0 + beta) / 2.0) * 2f64.powf((beta - 1.0) / 2.0);
    Ok((num / den).powf(1.0 / beta))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 2.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Lévy index must lie in (0, 2), got {beta}"
        )))
    }
}

/// Lévy index β with its cached σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyParams {
    beta: f64,
    sigma: f64,
}

impl Default for LevyParams {
    fn default() -> Self {
        Self::new(1.5).expect("1.5 is a valid index")
    }
}

impl LevyParams {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(Self {
            beta,
            sigma: levy_sigma(beta)?,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One step component. Draws u first, then v.
    pub fn step<R: RandomSource + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = self.sigma * rng.normal();
        let v = rng.normal();
        u / v.abs().powf(1.0 / self.beta)
    }

    pub fn sample<R: RandomSource + ?Sized>(&self, dim: usize, rng: &mut R) -> Vec<f64> {
        (0..dim).map(|_| self.step(rng)).collect()
    }
}

/// `dim` independent Lévy step components.
pub fn levy_sample<R: RandomSource + ?Sized>(
    params: &LevyParams,
    dim: usize,
    rng: &mut R,
) -> Vec<f64> {
    params.sample(dim, rng)
}
